#![no_main]

use libfuzzer_sys::{fuzz_target, Corpus};

use fdpsim::workload::{parse_trace, strip_gets};

fuzz_target!(|data: &[u8]| -> Corpus {
    match parse_trace(data) {
        Ok((rows, stats)) => {
            assert_eq!(stats.parsed, rows.len() as u64);
            // Malformed rows never exceed the abort threshold on success.
            let total = stats.parsed + stats.malformed;
            assert!(total == 0 || stats.malformed * 10 <= total);
            // The write-only transform must preserve non-GET rows.
            let sets = rows
                .iter()
                .filter(|r| r.op != fdpsim::workload::Op::Get)
                .count();
            assert_eq!(strip_gets(rows.into_iter()).count(), sets);
            Corpus::Keep
        }
        Err(_) => Corpus::Reject,
    }
});

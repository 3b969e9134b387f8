#![no_main]

use libfuzzer_sys::{fuzz_target, Corpus};

use fdpsim::scenario::ScenarioConfig;

fuzz_target!(|data: &[u8]| -> Corpus {
    let Ok(text) = std::str::from_utf8(data) else {
        return Corpus::Reject;
    };
    match ScenarioConfig::from_json(text) {
        Ok(cfg) => {
            // A config that parsed must also re-serialize and re-validate.
            let echoed = serde_json::to_string(&cfg).unwrap();
            let back = ScenarioConfig::from_json(&echoed).unwrap();
            assert_eq!(cfg, back);
            Corpus::Keep
        }
        Err(_) => Corpus::Reject,
    }
});

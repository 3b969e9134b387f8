//! Shared test support: a deliberately naive reference FTL used as the
//! equivalence oracle for the production engine.
//!
//! Each integration-test binary compiles this module separately and not all
//! of them exercise every helper.
#![allow(dead_code)]

pub mod reference_ftl;

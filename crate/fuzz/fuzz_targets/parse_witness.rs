#![no_main]

use std::str::FromStr;

use fujita_bounds::chains::{parse_witness, validate_chain, validate_profile};
use fujita_bounds::{Chain, SixfoldProfile};
use libfuzzer_sys::fuzz_target;

// The witness grammar must reject garbage without panicking; accepted
// witnesses round-trip through their typed forms, and validation (which
// treats violations as data) must hold up on arbitrary structures.
fuzz_target!(|data: &str| {
    let Ok(text) = parse_witness(data) else {
        return;
    };
    if text.m.is_some() {
        let profile = SixfoldProfile::from_str(data).expect("witness text builds a profile");
        let _ = validate_profile(&profile);
        let rendered = profile.to_string();
        let reparsed = SixfoldProfile::from_str(&rendered).expect("canonical display reparses");
        assert_eq!(reparsed, profile);
    } else {
        let chain = Chain::from_str(data).expect("witness text builds a chain");
        let _ = validate_chain(&chain);
        let rendered = chain.to_string();
        let reparsed = Chain::from_str(&rendered).expect("canonical display reparses");
        assert_eq!(reparsed, chain);
    }
});

#![no_main]

use fujita_bounds::RadicalSum;
use libfuzzer_sys::fuzz_target;

// Parsing arbitrary input must never panic, and any accepted value must
// round-trip exactly through its canonical textual form.
fuzz_target!(|data: &str| {
    if let Ok(value) = data.parse::<RadicalSum>() {
        let rendered = value.to_string();
        let reparsed: RadicalSum = rendered.parse().expect("canonical output reparses");
        assert_eq!(reparsed, value);
    }
});

#![no_main]

use bifset_core::poly::default_var_names;
use bifset_core::rational::RationalFunction;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // Long inputs only slow the coprimality check down.
    if text.len() > 256 {
        return;
    }
    let names = default_var_names(2);
    if let Ok(f) = RationalFunction::parse(text, &names) {
        assert!(!f.q().is_zero());
        let again = RationalFunction::parse(&f.display(), &names).expect("displayed form parses");
        assert_eq!(again.p(), f.p());
        assert_eq!(again.q(), f.q());
    }
});

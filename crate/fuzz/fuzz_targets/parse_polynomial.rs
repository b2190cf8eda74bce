#![no_main]

use bifset_core::parse::parse_polynomial;
use bifset_core::poly::default_var_names;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let names = default_var_names(3);
    if let Ok(p) = parse_polynomial(text, &names) {
        // Printing and parsing again must be the identity.
        let printed = p.display_with(&names).to_string();
        assert_eq!(parse_polynomial(&printed, &names).expect("printed form parses"), p);
    }
});

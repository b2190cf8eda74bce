#![no_main]

use bifset_core::report::BifurcationReport;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = BifurcationReport::from_json(text) {
        let again = BifurcationReport::from_json(&r.to_json()).expect("own output decodes");
        assert_eq!(again, r);
        let _ = r.to_text();
    }
});

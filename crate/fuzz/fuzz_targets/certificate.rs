#![no_main]

use libfuzzer_sys::fuzz_target;
use superbridge::{parse_certificate, verify_bundle, write_certificate};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = parse_certificate(text) {
        let again = parse_certificate(&write_certificate(&doc)).expect("written document parses");
        assert_eq!(again, doc);
        if doc.knot.len() <= 32 {
            let _ = verify_bundle(&doc.knot, &doc.bundle);
        }
    }
});

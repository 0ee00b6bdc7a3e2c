#![no_main]

use libfuzzer_sys::fuzz_target;
use superbridge::{parse_coords, write_coords};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_coords(text, "fuzz") {
        let again = parse_coords(&write_coords(&p), "fuzz").expect("written file parses");
        assert_eq!(again.vertices(), p.vertices());
        assert!(p.edges().sum().is_zero());
    }
});

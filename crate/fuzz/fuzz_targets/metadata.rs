#![no_main]

use libfuzzer_sys::fuzz_target;
use superbridge::{parse_metadata, render_table, TableFormat, TableSubset};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(records) = parse_metadata(text) {
        for format in [TableFormat::Text, TableFormat::Csv, TableFormat::Json] {
            let _ = render_table(&records, format, TableSubset::All);
        }
    }
});

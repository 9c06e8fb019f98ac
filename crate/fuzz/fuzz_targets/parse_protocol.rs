#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(p) = deloc_core::io::parse_protocol_file(text) {
            let again = deloc_core::io::parse_protocol_file(&deloc_core::io::write_protocol_file(&p)).unwrap();
            assert_eq!(p, again);
        }
    }
});

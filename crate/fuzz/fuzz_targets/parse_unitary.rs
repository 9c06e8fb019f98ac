#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(u) = deloc_core::io::parse_unitary_file(text) {
            let again = deloc_core::io::parse_unitary_file(&deloc_core::io::write_unitary_file(&u)).unwrap();
            assert_eq!(u, again);
        }
    }
});

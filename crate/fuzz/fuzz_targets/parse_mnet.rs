#![no_main]

use libfuzzer_sys::fuzz_target;

// the .mnet parser must reject malformed input gracefully, never panic
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = multri::mnet::parse_str(text);
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use multri::mnet::{parse_str, serialize};

// whenever a document parses, serializing and reparsing it must reproduce
// the same labeled network, and the second round must be a fixed point
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(first) = parse_str(text) else {
        return;
    };
    let emitted = serialize(&first.network, &first.labels);
    let second = parse_str(&emitted).expect("serialized form must parse");
    assert_eq!(second, first, "round trip changed the network");
    let emitted_again = serialize(&second.network, &second.labels);
    assert_eq!(emitted_again, emitted, "serialization is not a fixed point");
});

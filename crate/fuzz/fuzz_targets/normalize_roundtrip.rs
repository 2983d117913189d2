#![no_main]

use fibertop::specfile::{normalize_document, parse_spec};
use libfuzzer_sys::fuzz_target;

// Any document that parses must normalize to a stable form: the normalized
// text reparses, and normalizing again changes nothing.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = parse_spec(text) else { return };
    let normalized = normalize_document(&doc);
    let reparsed = parse_spec(&normalized).expect("normalized document reparses");
    assert_eq!(
        normalize_document(&reparsed),
        normalized,
        "normalization is a fixed point"
    );
});

//! Feeds arbitrary text to the symplectic-matrix JSON decoder. Accepted
//! matrices must re-encode to JSON that decodes again with the same dimension.

#![no_main]

use libfuzzer_sys::fuzz_target;
use metaplectic::SymplecticMatrix;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = SymplecticMatrix::from_json(text) {
        let again = SymplecticMatrix::from_json(&s.to_json())
            .expect("re-decode of encoded matrix failed");
        assert_eq!(s.dim(), again.dim());
    }
});

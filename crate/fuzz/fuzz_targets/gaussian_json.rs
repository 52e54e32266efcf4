//! Feeds arbitrary text to the Gaussian-state JSON decoder. Accepted states
//! must round-trip through JSON and support the numeric queries the rest of
//! the library performs on them.

#![no_main]

use libfuzzer_sys::fuzz_target;
use metaplectic::GaussianState;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = GaussianState::from_json(text) {
        let again =
            GaussianState::from_json(&g.to_json()).expect("re-decode of encoded state failed");
        assert_eq!(g.dim(), again.dim());
        // Exercise the numeric paths downstream of a successful parse. Extreme
        // but valid parameters may overflow to infinity; they must not panic.
        let _ = g.norm_sq();
        let _ = g.evaluate(&vec![0.0; g.dim()]);
    }
});

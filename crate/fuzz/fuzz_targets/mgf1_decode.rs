//! Feeds arbitrary bytes to the binary grid-function decoder. The decoder must
//! never panic, never allocate based on an unvalidated header, and anything it
//! accepts must survive a lossless encode/decode round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;
use metaplectic::mgf1;

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = mgf1::from_bytes(data) {
        let encoded = mgf1::to_bytes(&f);
        let again = mgf1::from_bytes(&encoded).expect("re-decode of encoded grid failed");
        assert_eq!(f, again, "grid round trip is not lossless");
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use supnorm::spectral::io::{read_binary, write_binary};

fuzz_target!(|data: &[u8]| {
    if let Ok(u) = read_binary(data) {
        let bytes = write_binary(&u);
        assert_eq!(bytes.as_slice(), data);
        assert_eq!(read_binary(&bytes).expect("re-encoded grid must parse"), u);
    }
});

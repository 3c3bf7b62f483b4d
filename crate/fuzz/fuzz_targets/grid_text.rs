#![no_main]

use libfuzzer_sys::fuzz_target;
use supnorm::spectral::io::{read_text, write_text};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(u) = read_text(text) {
        let again = read_text(&write_text(&u)).expect("re-encoded grid must parse");
        assert_eq!(u, again);
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use supnorm::spectral::io::{decode, encode, Encoding};
use supnorm::spectral::l1_bound_check;

fuzz_target!(|data: &[u8]| {
    let Ok(u) = decode(data) else {
        return;
    };
    for encoding in [Encoding::Text, Encoding::Binary] {
        assert_eq!(decode(&encode(&u, encoding)).expect("re-encoded grid must decode"), u);
    }
    // sup ≤ (2π)^{-n/2}‖û‖_1 must survive any decoded grid whose magnitudes stay in normal range
    let peak = u.samples().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if u.spec().len() <= 4096 && (1e-150..1e150).contains(&peak) {
        let report = l1_bound_check(&u, 1e-9);
        assert!(report.passed, "ratio {}", report.ratio);
    }
});

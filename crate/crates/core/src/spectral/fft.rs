//! In-place radix-2 complex FFT and its multi-axis extension.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Precomputed twiddles and bit-reversal table for one power-of-two length.
#[derive(Debug, Clone)]
pub struct Radix2 {
    len: usize,
    twiddles: Vec<Complex64>,
    bitrev: Vec<usize>,
}

impl Radix2 {
    /// Panics unless `len` is a power of two.
    pub fn new(len: usize) -> Self {
        assert!(
            len.is_power_of_two(),
            "radix-2 length must be a power of two"
        );
        let bits = len.trailing_zeros();
        let bitrev = (0..len)
            .map(|i| {
                if bits == 0 {
                    0
                } else {
                    i.reverse_bits() >> (usize::BITS - bits)
                }
            })
            .collect();
        // e^{-2πik/len}, each from its own sin/cos so errors do not accumulate
        let twiddles = (0..len / 2)
            .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / len as f64))
            .collect();
        Self {
            len,
            twiddles,
            bitrev,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Unnormalised DFT: `X_k = Σ_j x_j e^{∓2πijk/N}` (minus sign for forward).
    pub fn process(&self, data: &mut [Complex64], inverse: bool) {
        assert_eq!(data.len(), self.len);
        for i in 0..self.len {
            let j = self.bitrev[i];
            if i < j {
                data.swap(i, j);
            }
        }
        let mut size = 2;
        while size <= self.len {
            let half = size / 2;
            let step = self.len / size;
            for start in (0..self.len).step_by(size) {
                for k in 0..half {
                    let w = self.twiddles[k * step];
                    let w = if inverse { w.conj() } else { w };
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            size *= 2;
        }
    }
}

/// Applies the 1-D transform along every axis of a row-major `len^dims` array.
pub fn transform_axes(plan: &Radix2, data: &mut [Complex64], dims: u32, inverse: bool) {
    let len = plan.len();
    assert_eq!(data.len(), len.pow(dims));
    let mut line = vec![Complex64::new(0.0, 0.0); len];
    for axis in 0..dims {
        let stride = len.pow(dims - 1 - axis);
        let outer = len.pow(axis);
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * len * stride + inner;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + k * stride];
                }
                plan.process(&mut line, inverse);
                for (k, v) in line.iter().enumerate() {
                    data[base + k * stride] = *v;
                }
            }
        }
    }
}

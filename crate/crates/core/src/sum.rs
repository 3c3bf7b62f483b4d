//! Compensated summation shared by the norm and quadrature code.

/// Neumaier's variant of Kahan summation.
pub(crate) fn compensated<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut carry = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Pairwise reduction; the order depends only on the slice length.
pub(crate) fn pairwise(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        len => {
            let (lo, hi) = values.split_at(len / 2);
            pairwise(lo) + pairwise(hi)
        }
    }
}

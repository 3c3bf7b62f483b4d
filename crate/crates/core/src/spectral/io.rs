//! Grid-function files.
//!
//! Two encodings of the same content: a header (`n`, `N`, `L`, row-major
//! layout) followed by `N^n` complex samples, real and imaginary parts
//! interleaved. The last axis varies fastest.
//!
//! Text:
//!
//! ```text
//! supnorm-grid 1
//! n 2
//! N 8
//! L 4.0000000000000000e1
//! layout row-major
//! data
//! <re> <im>          (N^n lines)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Header keys may appear
//! in any order but each exactly once.
//!
//! Binary (little endian, 24-byte header):
//!
//! | offset | size | field |
//! |-------:|-----:|-------|
//! | 0 | 6 | magic `SNGRID` |
//! | 6 | 1 | format version, `1` |
//! | 7 | 1 | `n` |
//! | 8 | 4 | `N` (u32) |
//! | 12 | 8 | `L` (f64) |
//! | 20 | 1 | layout, `0` = row-major |
//! | 21 | 3 | reserved, zero |
//! | 24 | 16·N^n | samples as (re f64, im f64) pairs |

use std::path::Path;

use num_complex::Complex64;

use super::{GridFunction, GridSpec};
use crate::report::format_f64;
use crate::{Error, Result};

pub const TEXT_MAGIC: &str = "supnorm-grid";
pub const BINARY_MAGIC: &[u8; 6] = b"SNGRID";
pub const FORMAT_VERSION: u8 = 1;
const HEADER_LEN: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Text,
    Binary,
}

fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn grid_spec(n: u64, points: u64, box_length: f64) -> Result<GridSpec> {
    let n = u32::try_from(n).map_err(|_| format_err(format!("dimension {n} out of range")))?;
    let points = usize::try_from(points)
        .map_err(|_| format_err(format!("point count {points} out of range")))?;
    GridSpec::new(n, points, box_length).map_err(|e| format_err(format!("invalid header: {e}")))
}

pub fn write_text(u: &GridFunction) -> String {
    let spec = u.spec();
    let mut out = String::with_capacity(64 + 50 * spec.len());
    out.push_str(&format!("{TEXT_MAGIC} {FORMAT_VERSION}\n"));
    out.push_str(&format!("n {}\n", spec.n()));
    out.push_str(&format!("N {}\n", spec.points()));
    out.push_str(&format!("L {}\n", format_f64(spec.box_length())));
    out.push_str("layout row-major\ndata\n");
    for v in u.samples() {
        out.push_str(&format_f64(v.re));
        out.push(' ');
        out.push_str(&format_f64(v.im));
        out.push('\n');
    }
    out
}

fn parse_finite(token: &str, what: &str) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| format_err(format!("{what}: cannot parse `{token}` as a number")))?;
    if !v.is_finite() {
        return Err(format_err(format!("{what}: `{token}` is not finite")));
    }
    Ok(v)
}

pub fn read_text(text: &str) -> Result<GridFunction> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (lineno, first) = lines.next().ok_or_else(|| format_err("empty input"))?;
    let mut it = first.split_whitespace();
    if it.next() != Some(TEXT_MAGIC) {
        return Err(format_err(format!(
            "line {lineno}: missing `{TEXT_MAGIC}` magic"
        )));
    }
    match it.next() {
        Some(v) if v == FORMAT_VERSION.to_string() => {}
        other => {
            return Err(format_err(format!(
                "line {lineno}: unsupported version {other:?}"
            )))
        }
    }
    if it.next().is_some() {
        return Err(format_err(format!(
            "line {lineno}: trailing tokens after version"
        )));
    }

    let mut n = None;
    let mut points = None;
    let mut box_length = None;
    let mut layout = None;
    loop {
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| format_err("header ended before `data`"))?;
        if line == "data" {
            break;
        }
        let mut it = line.split_whitespace();
        let key = it.next().unwrap_or_default();
        let value = it.next().ok_or_else(|| {
            format_err(format!("line {lineno}: header key `{key}` without a value"))
        })?;
        if it.next().is_some() {
            return Err(format_err(format!(
                "line {lineno}: trailing tokens in header"
            )));
        }
        let slot_taken = match key {
            "n" => n
                .replace(
                    value
                        .parse::<u64>()
                        .map_err(|_| format_err(format!("line {lineno}: bad n `{value}`")))?,
                )
                .is_some(),
            "N" => points
                .replace(
                    value
                        .parse::<u64>()
                        .map_err(|_| format_err(format!("line {lineno}: bad N `{value}`")))?,
                )
                .is_some(),
            "L" => box_length
                .replace(parse_finite(value, &format!("line {lineno}"))?)
                .is_some(),
            "layout" => layout.replace(value.to_string()).is_some(),
            other => {
                return Err(format_err(format!(
                    "line {lineno}: unknown header key `{other}`"
                )))
            }
        };
        if slot_taken {
            return Err(format_err(format!(
                "line {lineno}: duplicate header key `{key}`"
            )));
        }
    }
    let (Some(n), Some(points), Some(box_length), Some(layout)) = (n, points, box_length, layout)
    else {
        return Err(format_err("header must define n, N, L and layout"));
    };
    if layout != "row-major" {
        return Err(format_err(format!("unsupported layout `{layout}`")));
    }
    let spec = grid_spec(n, points, box_length)?;

    let mut samples = Vec::with_capacity(spec.len().min(1 << 16));
    for (lineno, line) in lines {
        if samples.len() == spec.len() {
            return Err(format_err(format!(
                "line {lineno}: more than {} samples",
                spec.len()
            )));
        }
        let mut it = line.split_whitespace();
        let (Some(re), Some(im), None) = (it.next(), it.next(), it.next()) else {
            return Err(format_err(format!("line {lineno}: expected `<re> <im>`")));
        };
        let what = format!("line {lineno}");
        samples.push(Complex64::new(
            parse_finite(re, &what)?,
            parse_finite(im, &what)?,
        ));
    }
    if samples.len() != spec.len() {
        return Err(format_err(format!(
            "expected {} samples, found {}",
            spec.len(),
            samples.len()
        )));
    }
    GridFunction::new(spec, samples)
}

pub fn write_binary(u: &GridFunction) -> Vec<u8> {
    let spec = u.spec();
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * spec.len());
    out.extend_from_slice(BINARY_MAGIC);
    out.push(FORMAT_VERSION);
    out.push(spec.n() as u8);
    out.extend_from_slice(&(spec.points() as u32).to_le_bytes());
    out.extend_from_slice(&spec.box_length().to_le_bytes());
    out.push(0);
    out.extend_from_slice(&[0, 0, 0]);
    for v in u.samples() {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    out
}

pub fn read_binary(bytes: &[u8]) -> Result<GridFunction> {
    if bytes.len() < HEADER_LEN {
        return Err(format_err(format!(
            "truncated header: {} of {HEADER_LEN} bytes",
            bytes.len()
        )));
    }
    let (header, body) = bytes.split_at(HEADER_LEN);
    if &header[..6] != BINARY_MAGIC {
        return Err(format_err("bad magic"));
    }
    if header[6] != FORMAT_VERSION {
        return Err(format_err(format!("unsupported version {}", header[6])));
    }
    let n = u64::from(header[7]);
    let points = u64::from(u32::from_le_bytes(
        header[8..12].try_into().expect("4 bytes"),
    ));
    let box_length = f64::from_le_bytes(header[12..20].try_into().expect("8 bytes"));
    if header[20] != 0 {
        return Err(format_err(format!(
            "unsupported layout code {}",
            header[20]
        )));
    }
    if header[21..24] != [0, 0, 0] {
        return Err(format_err("reserved header bytes must be zero"));
    }
    if !box_length.is_finite() {
        return Err(format_err("box length is not finite"));
    }
    let spec = grid_spec(n, points, box_length)?;
    let expected = 16 * spec.len();
    if body.len() != expected {
        return Err(format_err(format!(
            "expected {expected} data bytes, found {}",
            body.len()
        )));
    }
    let samples: Vec<Complex64> = body
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().expect("8 bytes")),
                f64::from_le_bytes(c[8..].try_into().expect("8 bytes")),
            )
        })
        .collect();
    GridFunction::new(spec, samples).map_err(|e| format_err(e.to_string()))
}

/// Decodes either encoding, sniffing the binary magic.
pub fn decode(bytes: &[u8]) -> Result<GridFunction> {
    if bytes.starts_with(BINARY_MAGIC) {
        read_binary(bytes)
    } else {
        let text = std::str::from_utf8(bytes)
            .map_err(|_| format_err("input is neither binary nor UTF-8 text"))?;
        read_text(text)
    }
}

pub fn encode(u: &GridFunction, encoding: Encoding) -> Vec<u8> {
    match encoding {
        Encoding::Text => write_text(u).into_bytes(),
        Encoding::Binary => write_binary(u),
    }
}

pub fn load(path: impl AsRef<Path>) -> Result<GridFunction> {
    decode(&std::fs::read(path)?)
}

pub fn save(u: &GridFunction, path: impl AsRef<Path>, encoding: Encoding) -> Result<()> {
    std::fs::write(path, encode(u, encoding))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> GridFunction {
        let spec = GridSpec::new(2, 8, 3.5).unwrap();
        GridFunction::from_fn(spec, |x| {
            Complex64::new(x[0] - 0.1 * x[1], 1.0 / 3.0 + x[1])
        })
        .unwrap()
    }

    #[test]
    fn text_layout() {
        let text = write_text(&sample());
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("supnorm-grid 1"));
        assert_eq!(lines.next(), Some("n 2"));
        assert_eq!(lines.next(), Some("N 8"));
        assert_eq!(lines.next(), Some("L 3.5000000000000000e0"));
        assert_eq!(lines.next(), Some("layout row-major"));
        assert_eq!(lines.next(), Some("data"));
        assert_eq!(lines.count(), 64);
    }

    #[test]
    fn both_encodings_round_trip_exactly() {
        let u = sample();
        assert_eq!(read_text(&write_text(&u)).unwrap(), u);
        assert_eq!(read_binary(&write_binary(&u)).unwrap(), u);
        assert_eq!(decode(&encode(&u, Encoding::Binary)).unwrap(), u);
        assert_eq!(decode(&encode(&u, Encoding::Text)).unwrap(), u);
    }

    #[test]
    fn text_tolerates_comments_and_reordered_header() {
        let text = "# exported\nsupnorm-grid 1\nL 1\n\nlayout row-major\nN 8\nn 1\ndata\n"
            .to_string()
            + &"0 0\n# mid\n".repeat(8);
        let u = read_text(&text).unwrap();
        assert_eq!(u.spec().points(), 8);
    }

    #[test]
    fn text_rejections() {
        let good = write_text(&sample());
        let cases = [
            String::new(),
            good.replacen("supnorm-grid 1", "supnorm-grid 2", 1),
            good.replacen("n 2", "n 4", 1),
            good.replacen("N 8", "N 12", 1),
            good.replacen("layout row-major", "layout column-major", 1),
            good.replacen("n 2\n", "n 2\nn 2\n", 1),
            good.replacen("n 2\n", "", 1),
            good.replacen("data\n", "data\nnan 0\n", 1),
            good.replacen("data\n", "data\n1 2 3\n", 1),
            good.clone() + "0 0\n",
            good.lines().take(20).collect::<Vec<_>>().join("\n"),
            good.replacen("L 3.5000000000000000e0", "L inf", 1),
        ];
        for (i, c) in cases.iter().enumerate() {
            assert!(
                matches!(read_text(c), Err(Error::Format(_))),
                "case {i} accepted"
            );
        }
    }

    #[test]
    fn binary_rejections() {
        let good = write_binary(&sample());
        let mut cases = vec![good[..10].to_vec(), good[..good.len() - 1].to_vec()];
        let mut v = good.clone();
        v[0] = b'X';
        cases.push(v);
        let mut v = good.clone();
        v[6] = 9;
        cases.push(v);
        let mut v = good.clone();
        v[20] = 1;
        cases.push(v);
        let mut v = good.clone();
        v[22] = 1;
        cases.push(v);
        let mut v = good.clone();
        v[8..12].copy_from_slice(&u32::MAX.to_le_bytes());
        cases.push(v);
        let mut v = good.clone();
        v[12..20].copy_from_slice(&f64::NAN.to_le_bytes());
        cases.push(v);
        let mut v = good.clone();
        v[24..32].copy_from_slice(&f64::INFINITY.to_le_bytes());
        cases.push(v);
        let mut v = good;
        v.push(0);
        cases.push(v);
        for (i, c) in cases.iter().enumerate() {
            assert!(
                matches!(read_binary(c), Err(Error::Format(_))),
                "case {i} accepted"
            );
        }
    }

    proptest! {
        #[test]
        fn arbitrary_bytes_never_panic(data in proptest::collection::vec(any::<u8>(), 0..256)) {
            let _ = decode(&data);
        }

        #[test]
        fn random_samples_round_trip(
            n in 1u32..=2, values in proptest::collection::vec(-1e300f64..1e300, 128), l in 1e-3f64..1e3
        ) {
            let spec = GridSpec::new(n, 8, l).unwrap();
            let samples: Vec<Complex64> = (0..spec.len()).map(|i| Complex64::new(values[i % 128], -values[(i * 7) % 128])).collect();
            let u = GridFunction::new(spec, samples).unwrap();
            prop_assert_eq!(&read_text(&write_text(&u)).unwrap(), &u);
            prop_assert_eq!(&read_binary(&write_binary(&u)).unwrap(), &u);
        }
    }
}

//! Structured probe vectors `X[x1, x2, x3] = x x*` whose entries are
//! Gaussian-integer multiples of `1`, `t` or `s`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{rank_one_projector, ComplexMatrix, Matrix};
use crate::poly::{MPoly, PolyComplex};
use crate::scalar::ComplexRing;

/// The families used in the extremality argument.
pub const PAPER_FAMILIES: [&str; 13] = [
    "X[1,t,0]",
    "X[1,0,t]",
    "X[0,1,t]",
    "X[1,-ti,0]",
    "X[1,0,-ti]",
    "X[0,1,-ti]",
    "X[1,t,si]",
    "X[t,1,si]",
    "X[si,1,t]",
    "X[1,±1,±1]",
    "X[1,e^{±iπ/2},e^{±iπ/2}]",
    "X[1,1,i]",
    "X[1,i,1]",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeVar {
    T,
    S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sign {
    Fixed,
    /// `±`: an independent sign per occurrence.
    Free(usize),
    /// `e^{±iπ/2}`: one sign shared by every such occurrence.
    Phase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Component {
    re: i64,
    im: i64,
    var: Option<ProbeVar>,
    sign: Sign,
}

/// One sign choice of a family: each entry is `(re + i·im)·var`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeInstance {
    pub entries: Vec<(i64, i64, Option<ProbeVar>)>,
}

impl ProbeInstance {
    pub fn vector(&self, t: f64, s: f64) -> Vec<Complex64> {
        self.entries
            .iter()
            .map(|&(re, im, v)| {
                let scale = match v {
                    None => 1.0,
                    Some(ProbeVar::T) => t,
                    Some(ProbeVar::S) => s,
                };
                Complex64::new(re as f64 * scale, im as f64 * scale)
            })
            .collect()
    }

    pub fn matrix(&self, t: f64, s: f64) -> ComplexMatrix {
        rank_one_projector(&self.vector(t, s)).expect("probe vectors have three entries")
    }

    /// Entries with `t` and `s` as registry variables.
    pub fn vector_poly(&self) -> Vec<PolyComplex> {
        self.entries
            .iter()
            .map(|&(re, im, v)| {
                let base = PolyComplex::new(MPoly::int(re), MPoly::int(im));
                match v {
                    None => base,
                    Some(ProbeVar::T) => &base * &PolyComplex::real(MPoly::named("t").expect("t is registered")),
                    Some(ProbeVar::S) => &base * &PolyComplex::real(MPoly::named("s").expect("s is registered")),
                }
            })
            .collect()
    }

    /// `x x*` with polynomial entries; `t` and `s` are real.
    pub fn matrix_poly(&self) -> Matrix<PolyComplex> {
        let x = self.vector_poly();
        Matrix::from_fn(x.len(), |r, c| &x[r] * &x[c].conj())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeFamily {
    kind: String,
    components: Vec<Component>,
}

fn parse_component(raw: &str, free_count: &mut usize) -> Result<Component> {
    let bad = || Error::Parse(format!("bad probe component `{raw}`"));
    let src: String = raw.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace("pi", "π");
    match src.as_str() {
        "e^{±iπ/2}" => return Ok(Component { re: 0, im: 1, var: None, sign: Sign::Phase }),
        "e^{iπ/2}" => return Ok(Component { re: 0, im: 1, var: None, sign: Sign::Fixed }),
        "e^{-iπ/2}" => return Ok(Component { re: 0, im: -1, var: None, sign: Sign::Fixed }),
        _ => {}
    }
    let mut rest = src.as_str();
    let mut sign = Sign::Fixed;
    let mut neg = false;
    if let Some(r) = rest.strip_prefix('±') {
        sign = Sign::Free(*free_count);
        *free_count += 1;
        rest = r;
    } else if let Some(r) = rest.strip_prefix('-') {
        neg = true;
        rest = r;
    } else if let Some(r) = rest.strip_prefix('+') {
        rest = r;
    }
    let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
    let coef: i64 = if digits.is_empty() { 1 } else { digits.parse().map_err(|_| bad())? };
    let mut var = None;
    let mut imag = false;
    for ch in rest[digits.len()..].chars() {
        match ch {
            't' | 's' if var.is_none() => var = Some(if ch == 't' { ProbeVar::T } else { ProbeVar::S }),
            'i' if !imag => imag = true,
            _ => return Err(bad()),
        }
    }
    if digits.is_empty() && var.is_none() && !imag {
        return Err(bad());
    }
    let c = if neg { -coef } else { coef };
    let (re, im) = if imag { (0, c) } else { (c, 0) };
    Ok(Component { re, im, var, sign })
}

impl FromStr for ProbeFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix("X[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("probe family `{s}` is not of the form X[..]")))?;
        let mut free = 0;
        let components = inner.split(',').map(|c| parse_component(c, &mut free)).collect::<Result<Vec<_>>>()?;
        if components.len() != 3 {
            return Err(Error::Parse(format!("probe family `{s}` needs three components")));
        }
        Ok(Self { kind: s.trim().to_string(), components })
    }
}

impl fmt::Display for ProbeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.kind)
    }
}

impl Serialize for ProbeFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.kind)
    }
}

impl ProbeFamily {
    pub fn parse(s: &str) -> Result<Self> {
        s.parse()
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn uses(&self, v: ProbeVar) -> bool {
        self.components.iter().any(|c| c.var == Some(v))
    }

    /// All sign choices, in binary order with `+` first.
    pub fn instances(&self) -> Vec<ProbeInstance> {
        let free = self.components.iter().filter(|c| matches!(c.sign, Sign::Free(_))).count();
        let phase = self.components.iter().any(|c| c.sign == Sign::Phase);
        let bits = free + usize::from(phase);
        (0..1usize << bits)
            .map(|mask| ProbeInstance {
                entries: self
                    .components
                    .iter()
                    .map(|c| {
                        let flip = match c.sign {
                            Sign::Fixed => false,
                            Sign::Free(k) => mask >> (bits - 1 - k) & 1 == 1,
                            Sign::Phase => mask & 1 == 1,
                        };
                        let f = if flip { -1 } else { 1 };
                        (f * c.re, f * c.im, c.var)
                    })
                    .collect(),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c;

    #[test]
    fn every_paper_family_parses() {
        for k in PAPER_FAMILIES {
            let f = ProbeFamily::parse(k).unwrap();
            assert_eq!(f.kind(), k);
            for inst in f.instances() {
                let m = inst.matrix(0.7, -1.3);
                assert!(m.is_psd(1e-12).unwrap().is_psd);
            }
        }
    }

    #[test]
    fn sign_conventions() {
        let f = ProbeFamily::parse("X[1,±1,±1]").unwrap();
        let vs: Vec<_> = f.instances().iter().map(|i| i.vector(0.0, 0.0)).collect();
        assert_eq!(vs.len(), 4);
        assert_eq!(vs[1], vec![c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);

        let g = ProbeFamily::parse("X[1,e^{±iπ/2},e^{±iπ/2}]").unwrap();
        let ws: Vec<_> = g.instances().iter().map(|i| i.vector(0.0, 0.0)).collect();
        assert_eq!(
            ws,
            vec![vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0)], vec![c(1.0, 0.0), c(0.0, -1.0), c(0.0, -1.0)]]
        );

        let h = ProbeFamily::parse("X[1,-ti,0]").unwrap().instances().remove(0);
        assert_eq!(h.vector(2.0, 0.0), vec![c(1.0, 0.0), c(0.0, -2.0), c(0.0, 0.0)]);
        assert_eq!(h.matrix(2.0, 0.0)[(0, 1)], c(0.0, 2.0));
    }

    #[test]
    fn rejects_malformed_families() {
        for bad in ["X[1,t]", "Y[1,0,0]", "X[1,q,0]", "X[1,tt,0]", "X[1,,0]"] {
            assert!(ProbeFamily::parse(bad).is_err(), "{bad}");
        }
    }
}

//! The `omfq v1` text format.
//!
//! ```text
//! omfq v1
//! kind siegel
//! weight 35
//! gram 0 1 0; 1 0 0; 0 0 -2
//! denominator 1
//! truncation 1 0 1 <= 7
//! coeff 2 1 3 -1
//! ```
//!
//! Exponent vectors are integers over the common denominator and coefficient
//! lines are sorted lexicographically by exponent, so emitting a parsed
//! canonical file reproduces it byte for byte.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::jacobi::{JacobiFormExpansion, VVMFExpansion};
use crate::lattice::{discriminant_group, GramLattice};
use crate::ortho::{ConeRegion, OrthoFormExpansion};
use crate::series::{fmt_rat, int, parse_rat, rat, Constraint, LaurentSeries, Rational, TruncationRegion};
use crate::special::{siegel_lattice, SiegelExpansion};

#[derive(Clone, Debug, PartialEq)]
pub enum Expansion {
    Series { weight: Rational, series: LaurentSeries },
    Ortho(OrthoFormExpansion),
    Jacobi(JacobiFormExpansion),
    Vvmf(VVMFExpansion),
    Siegel(SiegelExpansion),
}

impl Expansion {
    pub fn kind(&self) -> &'static str {
        match self {
            Expansion::Series { .. } => "series",
            Expansion::Ortho(_) => "ortho",
            Expansion::Jacobi(_) => "jacobi",
            Expansion::Vvmf(_) => "vvmf",
            Expansion::Siegel(_) => "siegel",
        }
    }
}

fn lcm_of_denoms<'a, I: IntoIterator<Item = &'a Rational>>(xs: I) -> i64 {
    xs.into_iter().fold(1i64, |acc, x| acc.lcm(&x.denom().to_i64().expect("small denominator")))
}

fn scaled(x: &Rational, d: i64) -> i64 {
    (x * int(d)).to_integer().to_i64().expect("small exponent")
}

fn gram_line(l: &GramLattice) -> String {
    let rows: Vec<String> = l.gram().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
    format!("gram {}", rows.join("; "))
}

fn truncation_line(weights: &[Rational], bound: &Rational) -> String {
    let w: Vec<String> = weights.iter().map(fmt_rat).collect();
    format!("truncation {} <= {}", w.join(" "), fmt_rat(bound))
}

pub fn emit(x: &Expansion) -> String {
    let mut head = vec!["omfq v1".to_string(), format!("kind {}", x.kind())];
    let mut rows: Vec<(Vec<i64>, Rational)> = Vec::new();
    match x {
        Expansion::Series { weight, series } => {
            head.push(format!("weight {}", fmt_rat(weight)));
            head.push(format!("variables {}", series.nvars()));
            head.push(format!("denominator {}", series.denom()));
            for c in series.region().constraints() {
                head.push(truncation_line(&c.weights, &c.bound));
            }
            rows.extend(series.terms().map(|(e, c)| (e.clone(), c.clone())));
        }
        Expansion::Ortho(f) => {
            head.push(format!("weight {}", fmt_rat(f.weight())));
            head.push(gram_line(f.lattice()));
            let d = lcm_of_denoms(f.coeffs().keys().flatten());
            head.push(format!("denominator {d}"));
            head.push(truncation_line(&f.region().w0, &f.region().bound));
            if f.is_cusp() {
                head.push("flags cusp".into());
            }
            rows.extend(f.coeffs().iter().map(|(v, c)| (v.iter().map(|t| scaled(t, d)).collect(), c.clone())));
        }
        Expansion::Jacobi(phi) => {
            head.push(format!("weight {}", fmt_rat(phi.weight())));
            head.push(gram_line(phi.index()));
            let d = lcm_of_denoms(phi.coeffs().keys().flat_map(|(n, r)| std::iter::once(n).chain(r)));
            head.push(format!("denominator {d}"));
            head.push(truncation_line(&[int(1)], phi.bound()));
            if phi.is_weak() {
                head.push("flags weak".into());
            }
            if !phi.multiplier().is_empty() {
                head.push(format!("multiplier {}", phi.multiplier()));
            }
            rows.extend(phi.coeffs().iter().map(|((n, r), c)| {
                let mut e = vec![scaled(n, d)];
                e.extend(r.iter().map(|t| scaled(t, d)));
                (e, c.clone())
            }));
        }
        Expansion::Vvmf(f) => {
            head.push(format!("weight {}", fmt_rat(f.weight())));
            head.push(gram_line(f.lattice()));
            let d = lcm_of_denoms(f.coeffs().keys().map(|(_, n)| n));
            head.push(format!("denominator {d}"));
            head.push(truncation_line(&[int(1)], f.bound()));
            rows.extend(f.coeffs().iter().map(|((g, n), c)| {
                let mut e = g.clone();
                e.push(scaled(n, d));
                (e, c.clone())
            }));
        }
        Expansion::Siegel(f) => {
            head.push(format!("weight {}", f.weight));
            head.push(gram_line(&siegel_lattice()));
            head.push("denominator 1".into());
            head.push(truncation_line(&[int(1), int(0), int(1)], &int(f.bound)));
            rows.extend(f.coeffs().iter().map(|(&(a, b, c), v)| (vec![a, b, c], v.clone())));
        }
    }
    rows.sort();
    let mut out = head.join("\n");
    out.push('\n');
    for (e, c) in rows {
        let e: Vec<String> = e.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("coeff {} {}\n", e.join(" "), fmt_rat(&c)));
    }
    out
}

struct Header {
    kind: String,
    weight: Rational,
    variables: Option<usize>,
    gram: Option<GramLattice>,
    denom: i64,
    truncation: Vec<Constraint>,
    flags: Vec<String>,
    multiplier: Option<String>,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn rat_at(line: usize, s: &str) -> Result<Rational> {
    parse_rat(s).map_err(|_| err(line, format!("not a rational number: {s:?}")))
}

fn int_at(line: usize, s: &str) -> Result<i64> {
    s.parse().map_err(|_| err(line, format!("not an integer: {s:?}")))
}

pub fn parse(text: &str) -> Result<Expansion> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, "omfq v1")) => {}
        Some((n, l)) => return Err(err(n, format!("expected \"omfq v1\", found {l:?}"))),
        None => return Err(err(1, "empty input")),
    }
    let mut h = Header { kind: String::new(), weight: Rational::zero(), variables: None, gram: None, denom: 0, truncation: vec![], flags: vec![], multiplier: None };
    let mut seen_weight = false;
    let mut rows: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
    let mut last_line = 1;
    for (n, line) in lines {
        last_line = n;
        let (key, rest) = line.split_once(' ').ok_or_else(|| err(n, format!("malformed line {line:?}")))?;
        if key != "coeff" && !rows.is_empty() {
            return Err(err(n, "header line after coefficient lines"));
        }
        match key {
            "kind" => h.kind = rest.to_string(),
            "weight" => {
                h.weight = rat_at(n, rest)?;
                seen_weight = true;
            }
            "variables" => h.variables = Some(int_at(n, rest)? as usize),
            "gram" => {
                let rows: Vec<Vec<i64>> = rest
                    .split(';')
                    .map(|r| r.split_whitespace().map(|t| int_at(n, t)).collect())
                    .collect::<Result<_>>()?;
                h.gram = Some(GramLattice::new(rows).map_err(|e| err(n, e.to_string()))?);
            }
            "denominator" => {
                h.denom = int_at(n, rest)?;
                if h.denom <= 0 {
                    return Err(err(n, "denominator must be positive"));
                }
            }
            "truncation" => {
                let (w, b) = rest.split_once("<=").ok_or_else(|| err(n, "truncation needs \"<=\""))?;
                let weights = w.split_whitespace().map(|t| rat_at(n, t)).collect::<Result<Vec<_>>>()?;
                h.truncation.push(Constraint { weights, bound: rat_at(n, b.trim())? });
            }
            "flags" => h.flags.extend(rest.split_whitespace().map(String::from)),
            "multiplier" => h.multiplier = Some(rest.to_string()),
            "coeff" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                let (c, e) = toks.split_last().ok_or_else(|| err(n, "empty coefficient line"))?;
                let e = e.iter().map(|t| int_at(n, t)).collect::<Result<Vec<_>>>()?;
                let c = rat_at(n, c)?;
                if c.is_zero() {
                    return Err(err(n, "zero coefficients are not stored"));
                }
                if rows.insert(e.clone(), c).is_some() {
                    return Err(err(n, format!("duplicate exponent {e:?}")));
                }
            }
            _ => return Err(err(n, format!("unknown key {key:?}"))),
        }
    }
    if h.kind.is_empty() || !seen_weight || h.denom == 0 {
        return Err(err(last_line, "kind, weight and denominator are required"));
    }
    build(h, rows, last_line)
}

fn build(h: Header, rows: BTreeMap<Vec<i64>, Rational>, end: usize) -> Result<Expansion> {
    let d = h.denom;
    let wrap = |e: Error| err(end, e.to_string());
    let need_gram = || h.gram.clone().ok_or_else(|| err(end, "gram is required"));
    let single_bound = |arity: usize| -> Result<Rational> {
        match h.truncation.as_slice() {
            [c] if c.weights.len() == arity => Ok(c.bound.clone()),
            _ => Err(err(end, format!("expected one truncation line with {arity} weights"))),
        }
    };
    let check_len = |e: &Vec<i64>, len: usize| -> Result<()> {
        if e.len() == len {
            Ok(())
        } else {
            Err(err(end, format!("exponent {e:?} should have {len} entries")))
        }
    };
    match h.kind.as_str() {
        "series" => {
            let nvars = h.variables.ok_or_else(|| err(end, "series needs a variables line"))?;
            let region = h.truncation.iter().cloned().fold(TruncationRegion::exact(), |r, c| r.with(c));
            for e in rows.keys() {
                check_len(e, nvars)?;
                if !region.contains(e, d) {
                    return Err(err(end, format!("exponent {e:?} lies outside the truncation")));
                }
            }
            let series = LaurentSeries::from_terms(nvars, d, region, rows).map_err(wrap)?;
            Ok(Expansion::Series { weight: h.weight, series })
        }
        "ortho" => {
            let l = need_gram()?;
            let c = h.truncation.first().filter(|_| h.truncation.len() == 1).ok_or_else(|| err(end, "ortho needs one truncation line"))?;
            let region = ConeRegion::new(c.weights.clone(), c.bound.clone());
            let mut terms = Vec::new();
            for (e, v) in rows {
                check_len(&e, l.dim())?;
                let x: Vec<Rational> = e.iter().map(|&t| rat(t, d)).collect();
                if !region.contains(&l, &x) {
                    return Err(err(end, format!("exponent {e:?} lies outside the truncation")));
                }
                terms.push((x, v));
            }
            let cusp = h.flags.iter().any(|f| f == "cusp");
            Ok(Expansion::Ortho(OrthoFormExpansion::new(l, h.weight, region, cusp, terms).map_err(wrap)?))
        }
        "jacobi" => {
            let l = need_gram()?;
            let bound = single_bound(1)?;
            let mut terms = Vec::new();
            for (e, v) in rows {
                check_len(&e, l.dim() + 1)?;
                terms.push(((rat(e[0], d), e[1..].iter().map(|&t| rat(t, d)).collect()), v));
            }
            let weak = h.flags.iter().any(|f| f == "weak");
            let phi = JacobiFormExpansion::new(l, h.weight, bound, weak, terms).map_err(wrap)?;
            Ok(Expansion::Jacobi(match h.multiplier {
                Some(m) => phi.with_multiplier(m),
                None => phi,
            }))
        }
        "vvmf" => {
            let l = need_gram()?;
            let bound = single_bound(1)?;
            let g = discriminant_group(&l).map_err(wrap)?;
            let rank = g.orders().len();
            let mut terms = Vec::new();
            for (e, v) in rows {
                check_len(&e, rank + 1)?;
                let coset = e[..rank].to_vec();
                if coset.iter().zip(g.orders()).any(|(&a, &o)| a < 0 || a >= o) {
                    return Err(err(end, format!("{coset:?} is not a reduced coset")));
                }
                terms.push(((coset, rat(e[rank], d)), v));
            }
            Ok(Expansion::Vvmf(VVMFExpansion::with_group(g, h.weight, bound, terms).map_err(wrap)?))
        }
        "siegel" => {
            if h.gram.as_ref().is_some_and(|g| g != &siegel_lattice()) {
                return Err(err(end, "Siegel forms live on gram 0 1 0; 1 0 0; 0 0 -2"));
            }
            if d != 1 {
                return Err(err(end, "Siegel exponents are integral"));
            }
            let bound = single_bound(3)?;
            if !h.weight.is_integer() || !bound.is_integer() || h.truncation[0].weights != vec![int(1), int(0), int(1)] {
                return Err(err(end, "Siegel data needs an integral weight and truncation 1 0 1 <= B"));
            }
            let mut terms = Vec::new();
            for (e, v) in rows {
                check_len(&e, 3)?;
                terms.push(((e[0], e[1], e[2]), v));
            }
            let w = h.weight.to_integer().to_i64().ok_or_else(|| err(end, "weight out of range"))?;
            let b = bound.to_integer().to_i64().ok_or_else(|| err(end, "bound out of range"))?;
            Ok(Expansion::Siegel(SiegelExpansion::new(w, b, terms).map_err(wrap)?))
        }
        k => Err(err(end, format!("unknown kind {k:?}"))),
    }
}

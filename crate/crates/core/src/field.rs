//! Exact scalar arithmetic over Q, F_p, and small extension fields F_{p^m}.
//!
//! A `FieldSpec` is the arithmetic context; `FieldScalar` is plain data.
//! All operations go through the `FieldSpec` so scalars stay small (no back
//! pointers), mirroring the ring-passes-over-elements style used by the
//! exact-algebra crates this sits on top of.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Field description. Extensions are F_p[a]/(minpoly), minpoly monic of
/// degree m with 2 <= m <= 4 and p^m <= 2^20; irreducibility is checked at
/// construction by trial root/factor search.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    /// Prime field, p prime and p < 2^31.
    Prime(u64),
    /// minpoly holds the low coefficients c_0..c_{m-1} of
    /// x^m + c_{m-1} x^{m-1} + ... + c_0, each reduced mod p.
    Extension { p: u64, m: usize, minpoly: Vec<u64> },
}

/// A field element. Valid only relative to the `FieldSpec` it was made by.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rat(BigRational),
    Fp(u64),
    /// Little-endian coefficients in F_p, always of length m.
    Ext(Vec<u64>),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Evaluates the monic polynomial x^m + sum(low[i] x^i) at x mod p.
fn eval_monic(low: &[u64], x: u64, p: u64) -> u64 {
    let m = low.len();
    let mut acc = 1u64; // leading coefficient
    for i in (0..m).rev() {
        acc = (acc * x + low[i]) % p;
    }
    acc
}

/// Remainder of the monic polynomial x^m + low by the monic quadratic
/// x^2 + bx + c over F_p; returns true when it divides exactly.
fn divisible_by_quadratic(low: &[u64], b: u64, c: u64, p: u64) -> bool {
    let m = low.len();
    let mut rem = vec![0u64; m + 1];
    rem[..m].copy_from_slice(low);
    rem[m] = 1;
    for i in (2..=m).rev() {
        let lead = rem[i];
        if lead == 0 {
            continue;
        }
        rem[i] = 0;
        // subtract lead * x^(i-2) * (x^2 + b x + c)
        rem[i - 1] = (rem[i - 1] + p - lead * b % p) % p;
        rem[i - 2] = (rem[i - 2] + p - lead * c % p) % p;
    }
    rem[0] == 0 && rem[1] == 0
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a prime below 2^31")));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// minpoly given as low coefficients of the monic polynomial; entries
    /// are reduced mod p here.
    pub fn extension(p: u64, minpoly_low: Vec<u64>) -> Result<Self> {
        let m = minpoly_low.len();
        if !(2..=4).contains(&m) {
            return Err(Error::InvalidField(format!("extension degree {m} outside 2..=4")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let q = (p as u128).pow(m as u32);
        if q > 1 << 20 {
            return Err(Error::InvalidField(format!("field order {q} exceeds 2^20")));
        }
        let low: Vec<u64> = minpoly_low.iter().map(|c| c % p).collect();
        for x in 0..p {
            if eval_monic(&low, x, p) == 0 {
                return Err(Error::InvalidField(format!(
                    "minimal polynomial has root {x} mod {p}"
                )));
            }
        }
        if m == 4 {
            for b in 0..p {
                for c in 0..p {
                    if divisible_by_quadratic(&low, b, c, p) {
                        return Err(Error::InvalidField(format!(
                            "minimal polynomial divisible by x^2+{b}*x+{c} mod {p}"
                        )));
                    }
                }
            }
        }
        Ok(FieldSpec::Extension { p, m, minpoly: low })
    }

    /// Parses "Q", "F7", or "F16:x^4+x+1".
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let rest = s
            .strip_prefix('F')
            .ok_or_else(|| Error::InvalidField(format!("unrecognized field {s:?}")))?;
        match rest.split_once(':') {
            None => {
                let p: u64 = rest
                    .parse()
                    .map_err(|_| Error::InvalidField(format!("bad field order in {s:?}")))?;
                FieldSpec::prime(p)
            }
            Some((q_str, poly_str)) => {
                let q: u64 = q_str
                    .parse()
                    .map_err(|_| Error::InvalidField(format!("bad field order in {s:?}")))?;
                let coeffs = parse_minpoly(poly_str)?;
                let m = coeffs.len() - 1;
                if m < 2 {
                    return Err(Error::InvalidField(format!(
                        "extension form needs degree >= 2 in {s:?}"
                    )));
                }
                // recover p from q = p^m
                let p = (q as f64).powf(1.0 / m as f64).round() as u64;
                let p = (p.saturating_sub(1)..=p + 1)
                    .find(|&c| c >= 2 && (c as u128).pow(m as u32) == q as u128)
                    .ok_or_else(|| {
                        Error::InvalidField(format!("{q} is not p^{m} for the given minpoly"))
                    })?;
                if coeffs[m] != 1 {
                    return Err(Error::InvalidField("minimal polynomial must be monic".into()));
                }
                let low = coeffs[..m]
                    .iter()
                    .map(|&c| c.rem_euclid(p as i64) as u64)
                    .collect();
                FieldSpec::extension(p, low)
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
            FieldSpec::Extension { p, .. } => *p,
        }
    }

    /// Number of elements; None for Q.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some(*p),
            FieldSpec::Extension { p, m, .. } => Some(p.pow(*m as u32)),
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, FieldSpec::Rationals)
    }

    pub fn zero(&self) -> FieldScalar {
        match self {
            FieldSpec::Rationals => FieldScalar::Rat(BigRational::zero()),
            FieldSpec::Prime(_) => FieldScalar::Fp(0),
            FieldSpec::Extension { m, .. } => FieldScalar::Ext(vec![0; *m]),
        }
    }

    pub fn one(&self) -> FieldScalar {
        match self {
            FieldSpec::Rationals => FieldScalar::Rat(BigRational::one()),
            FieldSpec::Prime(_) => FieldScalar::Fp(1),
            FieldSpec::Extension { m, .. } => {
                let mut v = vec![0; *m];
                v[0] = 1;
                FieldScalar::Ext(v)
            }
        }
    }

    /// The extension generator a; equals zero spec-wise only for non-extensions,
    /// which is an input error handled by the parser.
    pub fn generator(&self) -> Result<FieldScalar> {
        match self {
            FieldSpec::Extension { m, .. } => {
                let mut v = vec![0; *m];
                v[1] = 1;
                Ok(FieldScalar::Ext(v))
            }
            _ => Err(Error::Parse("generator 'a' used outside an extension field".into())),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldScalar {
        match self {
            FieldSpec::Rationals => FieldScalar::Rat(BigRational::from(n.clone())),
            FieldSpec::Prime(p) | FieldSpec::Extension { p, .. } => {
                let p_big = BigInt::from(*p);
                let mut r = n % &p_big;
                if r.is_negative() {
                    r += &p_big;
                }
                let val: u64 = r.try_into().expect("reduced residue fits u64");
                match self {
                    FieldSpec::Prime(_) => FieldScalar::Fp(val),
                    FieldSpec::Extension { m, .. } => {
                        let mut v = vec![0; *m];
                        v[0] = val;
                        FieldScalar::Ext(v)
                    }
                    FieldSpec::Rationals => unreachable!(),
                }
            }
        }
    }

    pub fn from_i64(&self, n: i64) -> FieldScalar {
        self.from_bigint(&BigInt::from(n))
    }

    /// num/den as a field element; den must be invertible.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<FieldScalar> {
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        match self {
            FieldSpec::Rationals => Ok(FieldScalar::Rat(BigRational::new(num.clone(), den.clone()))),
            _ => {
                let d = self.from_bigint(den);
                let d_inv = self.inv(&d)?;
                Ok(self.mul(&self.from_bigint(num), &d_inv))
            }
        }
    }

    pub fn is_zero(&self, a: &FieldScalar) -> bool {
        match a {
            FieldScalar::Rat(r) => r.is_zero(),
            FieldScalar::Fp(v) => *v == 0,
            FieldScalar::Ext(v) => v.iter().all(|&c| c == 0),
        }
    }

    pub fn add(&self, a: &FieldScalar, b: &FieldScalar) -> FieldScalar {
        match (self, a, b) {
            (FieldSpec::Rationals, FieldScalar::Rat(x), FieldScalar::Rat(y)) => {
                FieldScalar::Rat(x + y)
            }
            (FieldSpec::Prime(p), FieldScalar::Fp(x), FieldScalar::Fp(y)) => {
                FieldScalar::Fp((x + y) % p)
            }
            (FieldSpec::Extension { p, .. }, FieldScalar::Ext(x), FieldScalar::Ext(y)) => {
                FieldScalar::Ext(x.iter().zip(y).map(|(u, v)| (u + v) % p).collect())
            }
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn neg(&self, a: &FieldScalar) -> FieldScalar {
        match (self, a) {
            (FieldSpec::Rationals, FieldScalar::Rat(x)) => FieldScalar::Rat(-x),
            (FieldSpec::Prime(p), FieldScalar::Fp(x)) => FieldScalar::Fp((p - x) % p),
            (FieldSpec::Extension { p, .. }, FieldScalar::Ext(x)) => {
                FieldScalar::Ext(x.iter().map(|&c| (p - c) % p).collect())
            }
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn sub(&self, a: &FieldScalar, b: &FieldScalar) -> FieldScalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldScalar, b: &FieldScalar) -> FieldScalar {
        match (self, a, b) {
            (FieldSpec::Rationals, FieldScalar::Rat(x), FieldScalar::Rat(y)) => {
                FieldScalar::Rat(x * y)
            }
            (FieldSpec::Prime(p), FieldScalar::Fp(x), FieldScalar::Fp(y)) => {
                FieldScalar::Fp(x * y % p)
            }
            (FieldSpec::Extension { p, m, minpoly }, FieldScalar::Ext(x), FieldScalar::Ext(y)) => {
                let mut prod = vec![0u64; 2 * m - 1];
                for (i, &xi) in x.iter().enumerate() {
                    if xi == 0 {
                        continue;
                    }
                    for (j, &yj) in y.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + xi * yj) % p;
                    }
                }
                // reduce by x^m = -minpoly_low
                for i in (*m..2 * m - 1).rev() {
                    let c = prod[i];
                    if c == 0 {
                        continue;
                    }
                    prod[i] = 0;
                    for (j, &q) in minpoly.iter().enumerate() {
                        let idx = i - m + j;
                        prod[idx] = (prod[idx] + p - c * q % p) % p;
                    }
                }
                prod.truncate(*m);
                FieldScalar::Ext(prod)
            }
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn inv(&self, a: &FieldScalar) -> Result<FieldScalar> {
        if self.is_zero(a) {
            return Err(Error::SingularMatrix);
        }
        match (self, a) {
            (FieldSpec::Rationals, FieldScalar::Rat(x)) => Ok(FieldScalar::Rat(x.recip())),
            (FieldSpec::Prime(p), FieldScalar::Fp(x)) => Ok(FieldScalar::Fp(mod_inv(*x, *p))),
            (FieldSpec::Extension { p, m, .. }, FieldScalar::Ext(x)) => {
                // Fermat: a^(q-2). q <= 2^20 keeps this cheap and branch-free.
                let q = p.pow(*m as u32);
                Ok(self.pow(&FieldScalar::Ext(x.clone()), q - 2))
            }
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn div(&self, a: &FieldScalar, b: &FieldScalar) -> Result<FieldScalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldScalar, mut e: u64) -> FieldScalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Builds an extension element from little-endian digits (reduced mod p).
    pub fn ext_from_digits(&self, digits: &[u64]) -> FieldScalar {
        match self {
            FieldSpec::Extension { p, m, .. } => {
                let mut v = vec![0; *m];
                for (i, &d) in digits.iter().take(*m).enumerate() {
                    v[i] = d % p;
                }
                FieldScalar::Ext(v)
            }
            _ => panic!("ext_from_digits on a non-extension field"),
        }
    }

    pub fn format_scalar(&self, a: &FieldScalar) -> String {
        match a {
            FieldScalar::Rat(r) => {
                if r.denom().is_one() {
                    format!("{}", r.numer())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            FieldScalar::Fp(v) => format!("{v}"),
            FieldScalar::Ext(v) => format_ext(v),
        }
    }

    /// True when the scalar prints as more than one additive term, needing
    /// parentheses in coefficient position.
    pub fn scalar_needs_parens(&self, a: &FieldScalar) -> bool {
        match a {
            FieldScalar::Ext(v) => v.iter().filter(|&&c| c != 0).count() > 1,
            _ => false,
        }
    }
}

fn format_ext(v: &[u64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for i in (0..v.len()).rev() {
        let c = v[i];
        if c == 0 {
            continue;
        }
        let part = match i {
            0 => format!("{c}"),
            1 if c == 1 => "a".to_string(),
            1 => format!("{c}*a"),
            _ if c == 1 => format!("a^{i}"),
            _ => format!("{c}*a^{i}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p), p prime and a nonzero mod p
    let (mut r0, mut r1) = (a as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    let mut s = s0 % p as i128;
    if s < 0 {
        s += p as i128;
    }
    s as u64
}

/// Parses a monic univariate minimal polynomial like "x^4+x+1" into
/// little-endian coefficients (length m+1).
fn parse_minpoly(s: &str) -> Result<Vec<i64>> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut coeffs: Vec<i64> = Vec::new();
    let mut push = |deg: usize, coef: i64| {
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, 0);
        }
        coeffs[deg] += coef;
    };
    let mut rest = cleaned.as_str();
    let mut sign = 1i64;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1;
        rest = r;
    }
    while !rest.is_empty() {
        let end = rest
            .char_indices()
            .find(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        let (tok, tail) = rest.split_at(end);
        if tok.is_empty() {
            return Err(Error::Parse(format!("empty term in minimal polynomial {s:?}")));
        }
        let (coef, deg) = parse_minpoly_term(tok)?;
        push(deg, sign * coef);
        if tail.is_empty() {
            break;
        }
        sign = if tail.starts_with('-') { -1 } else { 1 };
        rest = &tail[1..];
    }
    if coeffs.is_empty() {
        return Err(Error::Parse("empty minimal polynomial".into()));
    }
    Ok(coeffs)
}

fn parse_minpoly_term(tok: &str) -> Result<(i64, usize)> {
    // forms: 5, x, x^3, 5*x, 5*x^3, 5x^3
    let bad = || Error::Parse(format!("bad minimal polynomial term {tok:?}"));
    if let Some(xpos) = tok.find('x') {
        let coef_part = tok[..xpos].trim_end_matches('*');
        let coef: i64 = if coef_part.is_empty() {
            1
        } else {
            coef_part.parse().map_err(|_| bad())?
        };
        let after = &tok[xpos + 1..];
        let deg = if after.is_empty() {
            1
        } else {
            after.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
        };
        Ok((coef, deg))
    } else {
        Ok((tok.parse().map_err(|_| bad())?, 0))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
            FieldSpec::Extension { p, m, minpoly } => {
                let q = p.pow(*m as u32);
                write!(f, "F{q}:")?;
                write!(f, "x^{m}")?;
                for i in (0..*m).rev() {
                    let c = minpoly[i];
                    if c == 0 {
                        continue;
                    }
                    match i {
                        0 => write!(f, "+{c}")?,
                        1 if c == 1 => write!(f, "+x")?,
                        1 => write!(f, "+{c}*x")?,
                        _ if c == 1 => write!(f, "+x^{i}")?,
                        _ => write!(f, "+{c}*x^{i}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

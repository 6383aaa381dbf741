//! Tabulated finite-field arithmetic for exhaustive point scans.
//!
//! Elements of F_q are addressed by their little-endian digit value
//! (prime fields: the value itself), so a point is a `Vec<u32>` and every
//! field operation is a table lookup. Scenes over Q are rejected; scans over
//! extension towers (an extension of an extension) are unsupported.

use crate::action::{ActionElement, IntMatrix};
use crate::error::{Error, Result};
use crate::field::{FieldScalar, FieldSpec};
use crate::poly::Polynomial;
use smallvec::SmallVec;

/// Largest field order the table layer accepts (4 tables of q^2 u32 each).
pub const MAX_TABLE_ORDER: usize = 1024;
/// Raw tuple-space guard for a scan: q^(scan dims) must stay below this.
pub const RAW_TUPLE_GUARD: u64 = 1 << 26;

pub struct FqTable {
    /// The field being scanned (the base field or its chosen extension).
    pub field: FieldSpec,
    pub q: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    scalars: Vec<FieldScalar>,
}

/// First irreducible monic of degree m over F_p, scanning low-coefficient
/// vectors as a little-endian base-p counter. Deterministic, so the same
/// extension is chosen on every run.
pub fn default_minpoly(p: u64, m: u32) -> Result<Vec<u64>> {
    let total = (p as u128).pow(m);
    let mut counter: u128 = 1;
    while counter < total {
        let mut digits = Vec::with_capacity(m as usize);
        let mut c = counter;
        for _ in 0..m {
            digits.push((c % p as u128) as u64);
            c /= p as u128;
        }
        if FieldSpec::extension(p, digits.clone()).is_ok() {
            return Ok(digits);
        }
        counter += 1;
    }
    Err(Error::InvalidField(format!(
        "no irreducible polynomial of degree {m} over F_{p}"
    )))
}

impl FqTable {
    /// Tables for the degree-m extension of the scene's base field.
    /// m = 1 keeps the base field itself.
    pub fn build(base: &FieldSpec, m: u32) -> Result<FqTable> {
        if m == 0 {
            return Err(Error::InvalidField("extension power must be positive".into()));
        }
        let field = match base {
            FieldSpec::Rationals => {
                return Err(Error::NonFiniteField("point scans need a finite field".into()))
            }
            FieldSpec::Prime(_) if m == 1 => base.clone(),
            FieldSpec::Prime(p) => FieldSpec::extension(*p, default_minpoly(*p, m)?)?,
            FieldSpec::Extension { .. } if m == 1 => base.clone(),
            FieldSpec::Extension { .. } => {
                return Err(Error::UnsupportedExtension(
                    "scans over extensions of extension fields are not supported".into(),
                ))
            }
        };
        let q64 = field.order().expect("finite field has an order");
        if q64 > MAX_TABLE_ORDER as u64 {
            return Err(Error::EnumerationCap(format!(
                "field order {q64} exceeds the table limit {MAX_TABLE_ORDER}"
            )));
        }
        let q = q64 as usize;
        let scalars: Vec<FieldScalar> = (0..q).map(|i| index_scalar(&field, i)).collect();
        let mut add = vec![0u32; q * q];
        let mut mul = vec![0u32; q * q];
        let mut neg = vec![0u32; q];
        let mut inv = vec![0u32; q];
        for i in 0..q {
            neg[i] = scalar_index(&field, &field.neg(&scalars[i]));
            if i != 0 {
                inv[i] = scalar_index(&field, &field.inv(&scalars[i])?);
            }
            for j in 0..q {
                add[i * q + j] = scalar_index(&field, &field.add(&scalars[i], &scalars[j]));
                mul[i * q + j] = scalar_index(&field, &field.mul(&scalars[i], &scalars[j]));
            }
        }
        Ok(FqTable { field, q, add, mul, neg, inv, scalars })
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    /// Inverse of a nonzero index.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert_ne!(a, 0);
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut out = 1u32;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = self.mul(out, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        out
    }

    pub fn scalar(&self, idx: u32) -> &FieldScalar {
        &self.scalars[idx as usize]
    }

    /// Index of a scalar from the scan's BASE field inside this table's
    /// field (constants embed digit-wise).
    pub fn embed(&self, s: &FieldScalar) -> u32 {
        match s {
            FieldScalar::Fp(v) => *v as u32,
            FieldScalar::Ext(_) => scalar_index(&self.field, s),
            FieldScalar::Rat(_) => unreachable!("rational scalar in a finite scan"),
        }
    }
}

fn index_scalar(field: &FieldSpec, idx: usize) -> FieldScalar {
    match field {
        FieldSpec::Prime(_) => FieldScalar::Fp(idx as u64),
        FieldSpec::Extension { p, m, .. } => {
            let mut digits = vec![0u64; *m];
            let mut c = idx as u64;
            for d in digits.iter_mut() {
                *d = c % p;
                c /= p;
            }
            field.ext_from_digits(&digits)
        }
        FieldSpec::Rationals => unreachable!(),
    }
}

fn scalar_index(field: &FieldSpec, s: &FieldScalar) -> u32 {
    match (field, s) {
        (FieldSpec::Prime(_), FieldScalar::Fp(v)) => *v as u32,
        (FieldSpec::Extension { p, .. }, FieldScalar::Ext(digits)) => {
            let mut idx = 0u64;
            for &d in digits.iter().rev() {
                idx = idx * *p + d;
            }
            idx as u32
        }
        _ => unreachable!("scalar does not belong to the table field"),
    }
}

/// A polynomial lowered to index arithmetic: (coefficient index, exponents).
pub struct CompiledPoly {
    terms: Vec<(u32, SmallVec<[(u16, u32); 6]>)>,
}

impl CompiledPoly {
    pub fn compile(table: &FqTable, f: &Polynomial) -> CompiledPoly {
        let terms = f
            .terms()
            .iter()
            .map(|(m, c)| {
                let exps: SmallVec<[(u16, u32); 6]> = m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(i, e)| (i as u16, *e))
                    .collect();
                (table.embed(c), exps)
            })
            .collect();
        CompiledPoly { terms }
    }

    pub fn eval(&self, table: &FqTable, point: &[u32]) -> u32 {
        let mut acc = 0u32;
        for (coeff, exps) in &self.terms {
            let mut t = *coeff;
            for &(var, e) in exps {
                t = table.mul(t, table.pow(point[var as usize], e as u64));
            }
            acc = table.add(acc, t);
        }
        acc
    }
}

/// A group element lowered to index arithmetic.
pub enum CompiledMap {
    Affine { n: usize, matrix: Vec<u32>, translation: Vec<u32> },
    Monomial { n: usize, matrix: IntMatrix },
}

impl CompiledMap {
    pub fn compile(table: &FqTable, e: &ActionElement) -> Result<CompiledMap> {
        match e {
            ActionElement::Linear(m) => Ok(CompiledMap::Affine {
                n: m.rows,
                matrix: m.entries().iter().map(|s| table.embed(s)).collect(),
                translation: vec![0; m.rows],
            }),
            ActionElement::Affine(m, t) => Ok(CompiledMap::Affine {
                n: m.rows,
                matrix: m.entries().iter().map(|s| table.embed(s)).collect(),
                translation: t.iter().map(|s| table.embed(s)).collect(),
            }),
            ActionElement::Monomial(m) => Ok(CompiledMap::Monomial { n: m.n, matrix: m.clone() }),
            ActionElement::Lattice(_) => Err(Error::MixedKind(
                "lattice elements act on points only through torus scenes".into(),
            )),
        }
    }

    /// Image of a point. Affine maps use the ambient coordinates directly;
    /// monomial maps act on torus points (x, x^{-1}) of length 2n.
    pub fn apply(&self, table: &FqTable, point: &[u32], out: &mut Vec<u32>) {
        out.clear();
        match self {
            CompiledMap::Affine { n, matrix, translation } => {
                for i in 0..*n {
                    let mut acc = translation[i];
                    for j in 0..*n {
                        let m = matrix[i * n + j];
                        if m != 0 {
                            acc = table.add(acc, table.mul(m, point[j]));
                        }
                    }
                    out.push(acc);
                }
            }
            CompiledMap::Monomial { n, matrix } => {
                out.resize(2 * n, 1);
                for j in 0..*n {
                    let mut acc = 1u32;
                    for i in 0..*n {
                        let e = matrix.get(i, j);
                        if e == 0 {
                            continue;
                        }
                        let base = if e > 0 { point[i] } else { point[n + i] };
                        acc = table.mul(acc, table.pow(base, e.unsigned_abs()));
                    }
                    out[j] = acc;
                    out[n + j] = table.inv(acc);
                }
            }
        }
    }
}

/// Odometer over tuples in lexicographic order. `min_value` = 1 restricts
/// every coordinate to nonzero indices (torus scans).
pub struct TupleScan {
    current: Vec<u32>,
    q: u32,
    min_value: u32,
    started: bool,
    done: bool,
}

impl TupleScan {
    pub fn new(dims: usize, q: usize, min_value: u32) -> TupleScan {
        TupleScan {
            current: vec![min_value; dims],
            q: q as u32,
            min_value,
            started: false,
            done: dims == 0 || min_value >= q as u32,
        }
    }

    /// Advances to the next tuple and returns it, or None when exhausted.
    pub fn next(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        // increment the last coordinate first: lexicographic order
        for i in (0..self.current.len()).rev() {
            if self.current[i] + 1 < self.q {
                self.current[i] += 1;
                for c in self.current[i + 1..].iter_mut() {
                    *c = self.min_value;
                }
                return Some(&self.current);
            }
        }
        self.done = true;
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ExactMatrix;
    use crate::poly::{parse_poly, PolyRing};

    #[test]
    fn default_minpolys_are_the_expected_ones() {
        assert_eq!(default_minpoly(2, 2).unwrap(), vec![1, 1]); // x^2+x+1
        assert_eq!(default_minpoly(7, 2).unwrap(), vec![1, 0]); // x^2+1
        assert_eq!(default_minpoly(13, 2).unwrap(), vec![2, 0]); // x^2+2
        assert_eq!(default_minpoly(5, 2).unwrap(), vec![2, 0]); // x^2+2
    }

    #[test]
    fn tables_match_field_arithmetic() {
        let f7 = FieldSpec::parse("F7").unwrap();
        let t = FqTable::build(&f7, 2).unwrap(); // F_49
        assert_eq!(t.q, 49);
        let f = &t.field;
        for i in 0..t.q as u32 {
            let a = t.scalar(i).clone();
            assert_eq!(t.neg(i), scalar_index(f, &f.neg(&a)));
            if i != 0 {
                assert_eq!(t.mul(i, t.inv(i)), 1);
            }
            for j in [0u32, 1, 7, 13, 48] {
                let b = t.scalar(j).clone();
                assert_eq!(t.add(i, j), scalar_index(f, &f.add(&a, &b)));
                assert_eq!(t.mul(i, j), scalar_index(f, &f.mul(&a, &b)));
            }
        }
    }

    #[test]
    fn compiled_poly_matches_generic_evaluation() {
        let f7 = FieldSpec::parse("F7").unwrap();
        let t = FqTable::build(&f7, 2).unwrap();
        let r = PolyRing::plain(f7, 3);
        let f = parse_poly(&r, "x1^3 + 2*x2*x3 + 5*x3^2 + 1").unwrap();
        // the same polynomial read in the extension field
        let r49 = PolyRing::plain(t.field.clone(), 3);
        let f49 = parse_poly(&r49, "x1^3 + 2*x2*x3 + 5*x3^2 + 1").unwrap();
        let cp = CompiledPoly::compile(&t, &f);
        for idx in [[0u32, 1, 2], [11, 30, 48], [7, 7, 7], [48, 48, 1]] {
            let pt: Vec<FieldScalar> = idx.iter().map(|&i| t.scalar(i).clone()).collect();
            let direct = f49.evaluate(&pt).unwrap();
            assert_eq!(t.scalar(cp.eval(&t, &idx)), &direct);
        }
    }

    #[test]
    fn compiled_affine_map_application() {
        let f5 = FieldSpec::parse("F5").unwrap();
        let t = FqTable::build(&f5, 1).unwrap();
        let m = ExactMatrix::from_i64_rows(&f5, &[vec![0, 1], vec![1, 0]]);
        let e = ActionElement::affine(m, vec![f5.from_i64(3), f5.zero()]).unwrap();
        let cm = CompiledMap::compile(&t, &e).unwrap();
        let mut out = Vec::new();
        cm.apply(&t, &[1, 4], &mut out);
        assert_eq!(out, vec![2, 1]); // (x2 + 3, x1)
    }

    #[test]
    fn compiled_monomial_map_application() {
        let f7 = FieldSpec::parse("F7").unwrap();
        let t = FqTable::build(&f7, 1).unwrap();
        let e = ActionElement::monomial(IntMatrix::new(1, vec![-1])).unwrap();
        let cm = CompiledMap::compile(&t, &e).unwrap();
        let mut out = Vec::new();
        // the torus point (3, 3^{-1} = 5) maps to (5, 3)
        cm.apply(&t, &[3, 5], &mut out);
        assert_eq!(out, vec![5, 3]);
    }

    #[test]
    fn tuple_scan_is_lexicographic_and_complete() {
        let mut scan = TupleScan::new(2, 3, 0);
        let mut seen = Vec::new();
        while let Some(t) = scan.next() {
            seen.push(t.to_vec());
        }
        assert_eq!(seen.len(), 9);
        assert_eq!(seen[0], vec![0, 0]);
        assert_eq!(seen[1], vec![0, 1]);
        assert_eq!(seen[8], vec![2, 2]);
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(seen, sorted);

        let mut nz = TupleScan::new(2, 3, 1);
        let mut count = 0;
        while let Some(t) = nz.next() {
            assert!(t.iter().all(|&c| c != 0));
            count += 1;
        }
        assert_eq!(count, 4);
    }

    #[test]
    fn rationals_rejected_and_tower_rejected() {
        assert!(matches!(
            FqTable::build(&FieldSpec::Rationals, 1),
            Err(Error::NonFiniteField(_))
        ));
        let f4 = FieldSpec::parse("F4:x^2+x+1").unwrap();
        assert!(FqTable::build(&f4, 1).is_ok());
        assert!(matches!(
            FqTable::build(&f4, 2),
            Err(Error::UnsupportedExtension(_))
        ));
    }
}

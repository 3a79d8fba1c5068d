//! Exact multivariate Laurent polynomials over the integers.
//!
//! Terms are kept in a map keyed by [`Monomial`], whose ordering is
//! graded-lexicographic with `x1 > x2 > ... > xm`. The largest key is the
//! leading term; rendering walks the map from the top down.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("variable count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),
    #[error("variable x{index} out of range 1..={nvars}")]
    VarOutOfRange { index: usize, nvars: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not divisible: {dividend} / {divisor}")]
    NotDivisible { dividend: String, divisor: String },
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("zero polynomial has no monomial part")]
    ZeroInput,
    #[error("malformed polynomial document: {0}")]
    BadDocument(String),
}

/// An exponent vector `x1^e1 * ... * xm^em`, entries possibly negative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<i32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exponents(exps: Vec<i32>) -> Self {
        Monomial(exps)
    }

    /// `x_index` (1-based).
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index - 1] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| i64::from(e)).sum()
    }

    fn checked_mul(&self, other: &Monomial) -> Result<Monomial, LaurentError> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(LaurentError::ExponentOverflow))
            .collect::<Result<_, _>>()
            .map(Monomial)
    }

    fn checked_div(&self, other: &Monomial) -> Result<Monomial, LaurentError> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b).ok_or(LaurentError::ExponentOverflow))
            .collect::<Result<_, _>>()
            .map(Monomial)
    }

    /// Whether `other` divides `self` inside the ordinary polynomial ring.
    fn divisible_by(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A normalized Laurent polynomial in `nvars` variables: no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::term(Monomial::one(nvars), BigInt::one())
    }

    /// The initial variable `x_index` (1-based).
    pub fn var(nvars: usize, index: usize) -> Result<Self, LaurentError> {
        if index == 0 || index > nvars {
            return Err(LaurentError::VarOutOfRange { index, nvars });
        }
        Ok(Self::term(Monomial::var(nvars, index), BigInt::one()))
    }

    /// Single term `coeff * monomial`. A zero coefficient yields the zero polynomial.
    pub fn term(monomial: Monomial, coeff: BigInt) -> Self {
        let nvars = monomial.0.len();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(monomial, coeff);
        }
        LaurentPoly { nvars, terms }
    }

    /// Product of the given variables (with repetition), coefficient one.
    pub fn product_of_vars<I>(nvars: usize, vars: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut e = vec![0i32; nvars];
        for v in vars {
            if v == 0 || v > nvars {
                return Err(LaurentError::VarOutOfRange { index: v, nvars });
            }
            e[v - 1] = e[v - 1]
                .checked_add(1)
                .ok_or(LaurentError::ExponentOverflow)?;
        }
        Ok(Self::term(Monomial(e), BigInt::one()))
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, combining like terms.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (Vec<i32>, BigInt)>,
    {
        let mut p = LaurentPoly::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(LaurentError::VarMismatch(nvars, exps.len()));
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Sum of all coefficients, i.e. the value at `x = (1, ..., 1)`.
    pub fn eval_at_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.0.iter().all(|&e| e >= 0))
    }

    pub fn all_coefficients_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_vars(&self, other: &LaurentPoly) -> Result<(), LaurentError> {
        if self.nvars != other.nvars {
            return Err(LaurentError::VarMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_vars(other)?;
        let mut out = LaurentPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.checked_mul(mb)?, ca * cb);
            }
        }
        Ok(out)
    }

    fn mul_monomial(&self, m: &Monomial) -> Result<LaurentPoly, LaurentError> {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| Ok((k.checked_mul(m)?, c.clone())))
            .collect::<Result<_, LaurentError>>()?;
        Ok(LaurentPoly {
            nvars: self.nvars,
            terms,
        })
    }

    fn min_exponents(&self) -> Option<Monomial> {
        let mut it = self.terms.keys();
        let first = it.next()?.0.clone();
        let mins = it.fold(first, |mut acc, m| {
            for (a, &e) in acc.iter_mut().zip(&m.0) {
                *a = (*a).min(e);
            }
            acc
        });
        Some(Monomial(mins))
    }

    /// Exact quotient `self / divisor` in the Laurent polynomial ring.
    ///
    /// Both operands are shifted by their componentwise-minimal monomial into
    /// ordinary polynomials, divided by leading terms under graded-lex order,
    /// and the quotient is shifted back. Any non-zero remainder is an error.
    pub fn divide_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_vars(divisor)?;
        let shift_q = divisor
            .min_exponents()
            .ok_or(LaurentError::DivisionByZero)?;
        let Some(shift_p) = self.min_exponents() else {
            return Ok(LaurentPoly::zero(self.nvars));
        };
        let p = self.mul_monomial(&invert(&shift_p)?)?;
        let q = divisor.mul_monomial(&invert(&shift_q)?)?;
        let quotient =
            polynomial_divide_exact(&p, &q).ok_or_else(|| LaurentError::NotDivisible {
                dividend: self.to_string(),
                divisor: divisor.to_string(),
            })?;
        quotient.mul_monomial(&shift_p.checked_div(&shift_q)?)
    }

    /// Splits `self` as `f * x^(-d)` where `d` collects the negative exponents.
    ///
    /// `d[k] = max(0, -min_e e_k)` over the terms, so `f` is an ordinary
    /// polynomial not divisible by any variable that appears in the denominator.
    pub fn strip_monomial(&self) -> Result<(LaurentPoly, Vec<i32>), LaurentError> {
        let mins = self.min_exponents().ok_or(LaurentError::ZeroInput)?;
        let d: Vec<i32> = mins.0.iter().map(|&e| (-e).max(0)).collect();
        let f = self.mul_monomial(&Monomial(d.clone()))?;
        Ok((f, d))
    }

    /// `{"vars": m, "terms": [{"coeff": c, "exps": [...]}, ...]}`, terms in
    /// descending graded-lex order. Coefficients outside `i64` are strings.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(m, c)| {
                let coeff = match c.to_i64() {
                    Some(v) => json!(v),
                    None => json!(c.to_string()),
                };
                json!({ "coeff": coeff, "exps": m.0 })
            })
            .collect();
        json!({ "vars": self.nvars, "terms": terms })
    }

    pub fn from_json(doc: &Value) -> Result<LaurentPoly, LaurentError> {
        let bad = |msg: &str| LaurentError::BadDocument(msg.to_string());
        let nvars = doc
            .get("vars")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing vars"))? as usize;
        let terms = doc
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing terms"))?;
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            let coeff = match t.get("coeff") {
                Some(Value::Number(n)) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| bad("non-integer coeff"))?,
                Some(Value::String(s)) => s.parse::<BigInt>().map_err(|_| bad("bad coeff"))?,
                _ => return Err(bad("missing coeff")),
            };
            let exps = t
                .get("exps")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("missing exps"))?
                .iter()
                .map(|e| {
                    e.as_i64()
                        .and_then(|v| i32::try_from(v).ok())
                        .ok_or_else(|| bad("bad exponent"))
                })
                .collect::<Result<Vec<i32>, _>>()?;
            parsed.push((exps, coeff));
        }
        LaurentPoly::from_terms(nvars, parsed)
    }
}

fn invert(m: &Monomial) -> Result<Monomial, LaurentError> {
    m.0.iter()
        .map(|e| e.checked_neg().ok_or(LaurentError::ExponentOverflow))
        .collect::<Result<_, _>>()
        .map(Monomial)
}

/// Leading-term division of ordinary polynomials; `None` unless `q` divides `p`.
fn polynomial_divide_exact(p: &LaurentPoly, q: &LaurentPoly) -> Option<LaurentPoly> {
    let (lm_q, lc_q) = q.leading_term()?;
    let (lm_q, lc_q) = (lm_q.clone(), lc_q.clone());
    let mut rem = p.clone();
    let mut quotient = LaurentPoly::zero(p.nvars);
    while let Some((lm_r, lc_r)) = rem.leading_term() {
        if !lm_r.divisible_by(&lm_q) || !(lc_r % &lc_q).is_zero() {
            return None;
        }
        let m = lm_r.checked_div(&lm_q).ok()?;
        let c = lc_r / &lc_q;
        let step = q.mul_monomial(&m).ok()?;
        for (k, v) in &step.terms {
            rem.add_term(k.clone(), -(v * &c));
        }
        quotient.add_term(m, c);
    }
    Some(quotient)
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let is_const = m.0.iter().all(|&e| e == 0);
            if is_const {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> LaurentPoly {
        LaurentPoly::var(n, i).unwrap()
    }

    fn poly(n: usize, terms: &[(&[usize], i64)]) -> LaurentPoly {
        let mut p = LaurentPoly::zero(n);
        for (vars, c) in terms {
            let m = LaurentPoly::product_of_vars(n, vars.iter().copied()).unwrap();
            let m = m
                .mul(&LaurentPoly::term(Monomial::one(n), BigInt::from(*c)))
                .unwrap();
            p = p.add(&m).unwrap();
        }
        p
    }

    #[test]
    fn difference_of_squares() {
        let s = x(2, 1).add(&x(2, 2)).unwrap();
        let d = x(2, 1).sub(&x(2, 2)).unwrap();
        let p = s.mul(&d).unwrap();
        assert_eq!(p.to_string(), "x1^2 - x2^2");
    }

    #[test]
    fn additive_identity() {
        let p = poly(4, &[(&[3], 1), (&[2, 4], 1)]);
        assert_eq!(p.add(&LaurentPoly::zero(4)).unwrap(), p);
    }

    #[test]
    fn first_mutation_of_rank_two_example() {
        let num = poly(6, &[(&[3], 1), (&[2, 4], 1)]);
        let inv = LaurentPoly::term(
            Monomial::from_exponents(vec![-1, 0, 0, 0, 0, 0]),
            BigInt::one(),
        );
        let p = num.mul(&inv).unwrap();
        assert_eq!(p.to_string(), "x1^-1*x2*x4 + x1^-1*x3");
        assert_eq!(p.divide_exact(&inv).unwrap(), num);
    }

    #[test]
    fn mismatched_variable_counts() {
        assert_eq!(x(2, 1).add(&x(3, 1)), Err(LaurentError::VarMismatch(2, 3)));
        assert!(x(2, 1).mul(&x(3, 1)).is_err());
    }

    #[test]
    fn divide_by_monomial() {
        let p = poly(3, &[(&[1, 2], 1), (&[1, 3], 1)]);
        let q = p.divide_exact(&x(3, 1)).unwrap();
        assert_eq!(q, poly(3, &[(&[2], 1), (&[3], 1)]));
    }

    #[test]
    fn laurent_quotient_with_negative_exponents() {
        let p = poly(6, &[(&[3, 5], 1), (&[1, 3, 6], 1), (&[2, 4, 5], 1)]);
        let q = poly(6, &[(&[1, 2], 1)]);
        let r = p.divide_exact(&q).unwrap();
        assert!(!r.is_polynomial());
        assert_eq!(r.mul(&q).unwrap(), p);
    }

    #[test]
    fn not_divisible() {
        let p = x(3, 1).add(&x(3, 2)).unwrap();
        let q = x(3, 1).add(&x(3, 3)).unwrap();
        assert!(matches!(
            p.divide_exact(&q),
            Err(LaurentError::NotDivisible { .. })
        ));
        assert_eq!(
            p.divide_exact(&LaurentPoly::zero(3)),
            Err(LaurentError::DivisionByZero)
        );
    }

    #[test]
    fn product_round_trip() {
        let a = poly(6, &[(&[3], 1), (&[2, 4], 1)]);
        let b = poly(6, &[(&[5], 1), (&[1, 6], 1)]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.divide_exact(&a).unwrap(), b);
        assert_eq!(ab.divide_exact(&b).unwrap(), a);
    }

    #[test]
    fn strip_examples() {
        let p = poly(6, &[(&[3], 1), (&[2, 4], 1)])
            .divide_exact(&x(6, 1))
            .unwrap();
        let (f, d) = p.strip_monomial().unwrap();
        assert_eq!(f, poly(6, &[(&[3], 1), (&[2, 4], 1)]));
        assert_eq!(d, vec![1, 0, 0, 0, 0, 0]);

        let (f, d) = x(9, 7).strip_monomial().unwrap();
        assert_eq!(f, x(9, 7));
        assert!(d.iter().all(|&e| e == 0));

        let num = poly(6, &[(&[3, 5], 1), (&[1, 3, 6], 1), (&[2, 4, 5], 1)]);
        let v = num.divide_exact(&poly(6, &[(&[1, 2], 1)])).unwrap();
        let (f, d) = v.strip_monomial().unwrap();
        assert_eq!(f, num);
        assert_eq!(d, vec![1, 1, 0, 0, 0, 0]);

        assert_eq!(
            LaurentPoly::zero(2).strip_monomial(),
            Err(LaurentError::ZeroInput)
        );
    }

    #[test]
    fn rendering_is_graded_lex_descending() {
        let p = poly(6, &[(&[3, 5], 1), (&[1, 3, 6], 1), (&[2, 4, 5], 1)]);
        assert_eq!(p.to_string(), "x1*x3*x6 + x2*x4*x5 + x3*x5");
        assert_eq!(poly(2, &[(&[1], -3), (&[], 2)]).to_string(), "-3*x1 + 2");
        assert_eq!(LaurentPoly::zero(2).to_string(), "0");
    }

    #[test]
    fn json_round_trip() {
        let p = poly(4, &[(&[1, 1], 2), (&[3], -1), (&[], 5)]);
        let doc = p.to_json();
        assert_eq!(doc["vars"], 4);
        assert_eq!(LaurentPoly::from_json(&doc).unwrap(), p);
        let big = LaurentPoly::term(Monomial::one(1), BigInt::from(i64::MAX) * 4);
        assert_eq!(LaurentPoly::from_json(&big.to_json()).unwrap(), big);
    }

    #[test]
    fn exponent_overflow_is_reported() {
        let m = LaurentPoly::term(Monomial::from_exponents(vec![i32::MAX]), BigInt::one());
        assert_eq!(m.mul(&m), Err(LaurentError::ExponentOverflow));
    }
}

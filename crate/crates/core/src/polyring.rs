//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Every polynomial carries a reference to the [`VarTable`] it is defined
//! over. Exponent vectors are dense, one slot per variable, and terms live in
//! an ordered map so that two equal polynomials always have identical term
//! maps. Zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num/den`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Ordered, duplicate-free list of variable names shared by a family of
/// polynomials.
#[derive(Clone, Debug)]
pub struct VarTable(Arc<[String]>);

impl VarTable {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::DuplicateVariable(n.clone()));
            }
        }
        Ok(VarTable(names.into()))
    }

    /// A table with no variables, for purely rational computations.
    pub fn empty() -> Self {
        VarTable(Vec::new().into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

impl PartialEq for VarTable {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for VarTable {}

/// Degree of a polynomial in one variable. The zero polynomial has no degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    Zero,
    Finite(u32),
}

impl Degree {
    pub fn at_most(self, bound: u32) -> bool {
        match self {
            Degree::Zero => true,
            Degree::Finite(d) => d <= bound,
        }
    }
}

type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    vars: VarTable,
    terms: BTreeMap<Exponents, Rational>,
}

impl MPoly {
    pub fn zero(vars: &VarTable) -> Self {
        MPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &VarTable) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &VarTable, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn var(vars: &VarTable, name: &str) -> Result<Self> {
        let idx = vars.index_of(name)?;
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(e, Rational::one());
        Ok(p)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated monomials and dropping zeros.
    pub fn from_terms<I>(vars: &VarTable, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::ArityMismatch {
                    expected: vars.len(),
                    found: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterates over `(exponents, coefficient)` in ascending lexicographic
    /// exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// The value of a constant polynomial, `None` if any variable occurs.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .map_or(Degree::Zero, Degree::Finite)
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &MPoly) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VarTableMismatch)
        }
    }

    pub fn checked_add(&self, other: &MPoly) -> Result<MPoly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MPoly) -> Result<MPoly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MPoly) -> Result<MPoly> {
        let mut out = MPoly::zero(&self.vars);
        out.add_product(self, other)?;
        Ok(out)
    }

    /// `self += a * b`, without materialising the product.
    pub fn add_product(&mut self, a: &MPoly, b: &MPoly) -> Result<()> {
        self.check_same(a)?;
        self.check_same(b)?;
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                self.add_term(e, ca * cb);
            }
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.vars);
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut out = MPoly::one(&self.vars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn degree_in(&self, var: &str) -> Result<Degree> {
        let idx = self.vars.index_of(var)?;
        Ok(self
            .terms
            .keys()
            .map(|e| e[idx])
            .max()
            .map_or(Degree::Zero, Degree::Finite))
    }

    /// Coefficients `[c0, c1, ...]` with `self = sum c_k * var^k`, each
    /// `c_k` free of `var`. The zero polynomial yields an empty vector.
    pub fn coefficients_in(&self, var: &str) -> Result<Vec<MPoly>> {
        let idx = self.vars.index_of(var)?;
        let mut out: Vec<MPoly> = Vec::new();
        for (e, c) in &self.terms {
            let k = e[idx] as usize;
            if out.len() <= k {
                out.resize(k + 1, MPoly::zero(&self.vars));
            }
            let mut e = e.clone();
            e[idx] = 0;
            out[k].add_term(e, c.clone());
        }
        Ok(out)
    }

    /// Splits a polynomial of degree at most one in `var` as
    /// `self = p1 * var + p0`.
    pub fn split_linear(&self, var: &str) -> Result<(MPoly, MPoly)> {
        if let Degree::Finite(d) = self.degree_in(var)? {
            if d > 1 {
                return Err(Error::DegreeTooHigh {
                    var: var.to_string(),
                    degree: d,
                });
            }
        }
        let mut coeffs = self.coefficients_in(var)?.into_iter();
        let p0 = coeffs.next().unwrap_or_else(|| MPoly::zero(&self.vars));
        let p1 = coeffs.next().unwrap_or_else(|| MPoly::zero(&self.vars));
        Ok((p1, p0))
    }

    /// Evaluates at a point given positionally, one value per table entry.
    pub fn eval_slice(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.vars.len() {
            return Err(Error::ArityMismatch {
                expected: self.vars.len(),
                found: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Evaluates at a named point. Only variables that actually occur need
    /// an assignment.
    pub fn eval(&self, point: &BTreeMap<String, Rational>) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let name = &self.vars.names()[i];
                let x = point
                    .get(name)
                    .ok_or_else(|| Error::MissingAssignment(name.clone()))?;
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes values for the assigned variables and keeps the rest
    /// symbolic. Unknown names in `point` are ignored.
    pub fn eval_partial(&self, point: &BTreeMap<String, Rational>) -> MPoly {
        let slots: Vec<Option<&Rational>> =
            self.vars.names().iter().map(|n| point.get(n)).collect();
        let mut out = MPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            let mut e = e.clone();
            for (i, val) in slots.iter().enumerate() {
                if let Some(x) = val {
                    for _ in 0..e[i] {
                        t *= *x;
                    }
                    e[i] = 0;
                }
            }
            out.add_term(e, t);
        }
        out
    }

    /// Re-expresses the polynomial over a larger table containing every
    /// variable of the current one.
    pub fn lift(&self, target: &VarTable) -> Result<MPoly> {
        let map: Vec<usize> = self
            .vars
            .names()
            .iter()
            .map(|n| target.index_of(n))
            .collect::<Result<_>>()?;
        let mut out = MPoly::zero(target);
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.len()];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] = k;
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Terms in graded-lex order: higher total degree first, ties broken by
    /// descending lexicographic exponent order.
    fn graded_terms(&self) -> Vec<(&Exponents, &Rational)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        ts
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, names: &[String], e: &[u32]) -> fmt::Result {
    let mut first = true;
    for (n, &k) in names.iter().zip(e) {
        if k == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(n)?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.graded_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let is_const = e.iter().all(|&k| k == 0);
            if is_const {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, self.vars.names(), e)?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &'a MPoly) -> MPoly {
        self.checked_add(rhs).expect("variable table mismatch")
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &'a MPoly) -> MPoly {
        self.checked_sub(rhs).expect("variable table mismatch")
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &'a MPoly) -> MPoly {
        self.checked_mul(rhs).expect("variable table mismatch")
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

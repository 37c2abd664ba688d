//! Operators on tensor powers of the two-dimensional color space, with
//! polynomial entries.
//!
//! Matrices are stored densely; entries are sparse [`MPoly`] values, so a
//! rational matrix is just one whose entries are all constants. Row and
//! column indices are big-endian multi-index codes, and `m[(row, col)]` is
//! the amplitude of output state `row` for input state `col`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::bitlinalg::{extract_bits, insert_bits, MultiIndex, PermOperator};
use crate::error::{Error, Result};
use crate::polyring::{rat, Degree, MPoly, Rational, VarTable};
use crate::report::Witness;

/// Largest number of tensor factors an [`OpMatrix`] may have.
pub const MAX_SITES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpMatrix {
    sites: usize,
    vars: VarTable,
    entries: Vec<MPoly>,
}

/// Ordered 1-based positions that the factors of a small operator occupy
/// inside a larger tensor product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotEmbedding {
    total_sites: usize,
    slots: Vec<usize>,
}

impl SlotEmbedding {
    pub fn new(total_sites: usize, slots: Vec<usize>) -> Result<Self> {
        for (i, &s) in slots.iter().enumerate() {
            if s == 0 || s > total_sites {
                return Err(Error::SlotOutOfRange { slot: s, total: total_sites });
            }
            if slots[..i].contains(&s) {
                return Err(Error::DuplicateSlot(s));
            }
        }
        Ok(SlotEmbedding { total_sites, slots })
    }

    pub fn total_sites(&self) -> usize {
        self.total_sites
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }
}

impl OpMatrix {
    pub fn zeros(sites: usize, vars: &VarTable) -> Self {
        assert!(sites <= MAX_SITES, "{sites} sites exceeds {MAX_SITES}");
        let dim = 1 << sites;
        OpMatrix {
            sites,
            vars: vars.clone(),
            entries: vec![MPoly::zero(vars); dim * dim],
        }
    }

    pub fn identity(sites: usize, vars: &VarTable) -> Self {
        let mut m = Self::zeros(sites, vars);
        for i in 0..m.dim() {
            m.set(i, i, MPoly::one(vars));
        }
        m
    }

    /// Builds a matrix from rational entries given row by row.
    pub fn from_rationals(sites: usize, vars: &VarTable, rows: &[Vec<Rational>]) -> Result<Self> {
        let mut m = Self::zeros(sites, vars);
        if rows.len() != m.dim() {
            return Err(Error::DimMismatch { left: m.dim(), right: rows.len() });
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != m.dim() {
                return Err(Error::DimMismatch { left: m.dim(), right: row.len() });
            }
            for (c, x) in row.iter().enumerate() {
                m.set(r, c, MPoly::constant(vars, x.clone()));
            }
        }
        Ok(m)
    }

    /// The 0/1 matrix with `M[op(x), x] = 1`.
    pub fn from_perm(op: &PermOperator, vars: &VarTable) -> Self {
        let mut m = Self::zeros(op.arity(), vars);
        for x in 0..m.dim() as u32 {
            m.set(op.image(x) as usize, x as usize, MPoly::one(vars));
        }
        m
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        1 << self.sites
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn get(&self, row: usize, col: usize) -> &MPoly {
        &self.entries[row * self.dim() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: MPoly) {
        let d = self.dim();
        self.entries[row * d + col] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(MPoly::is_zero)
    }

    pub fn count_nonzero(&self) -> usize {
        self.entries.iter().filter(|p| !p.is_zero()).count()
    }

    /// Nonzero entries as `(row, col, value)`, row-major.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, &MPoly)> {
        let d = self.dim();
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(move |(i, p)| (i / d, i % d, p))
    }

    /// Applies `f` to every entry.
    pub fn map_entries(&self, mut f: impl FnMut(&MPoly) -> MPoly) -> Self {
        OpMatrix {
            sites: self.sites,
            vars: self.vars.clone(),
            entries: self.entries.iter().map(&mut f).collect(),
        }
    }

    fn check_compatible(&self, other: &OpMatrix) -> Result<()> {
        if self.sites != other.sites {
            return Err(Error::DimMismatch { left: self.dim(), right: other.dim() });
        }
        if self.vars != other.vars {
            return Err(Error::VarTableMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &OpMatrix) -> Result<OpMatrix> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            if !b.is_zero() {
                *a = &*a + b;
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &OpMatrix) -> Result<OpMatrix> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> OpMatrix {
        self.map_entries(|p| -p)
    }

    pub fn scale(&self, c: &MPoly) -> Result<OpMatrix> {
        if c.vars() != &self.vars {
            return Err(Error::VarTableMismatch);
        }
        Ok(self.map_entries(|p| if p.is_zero() { p.clone() } else { p * c }))
    }

    /// `s + coeff * t`, entrywise.
    pub fn linear_comb(s: &OpMatrix, t: &OpMatrix, coeff: &MPoly) -> Result<OpMatrix> {
        s.add(&t.scale(coeff)?)
    }

    /// Exact matrix product, skipping zero entries.
    pub fn matmul(&self, other: &OpMatrix) -> Result<OpMatrix> {
        self.check_compatible(other)?;
        let d = self.dim();
        let mut out = OpMatrix::zeros(self.sites, &self.vars);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * d + j].add_product(a, b)?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Places this operator on the given slots of a larger tensor product,
    /// acting as the identity on the remaining factors.
    pub fn embed(&self, e: &SlotEmbedding) -> Result<OpMatrix> {
        if e.slots().len() != self.sites {
            return Err(Error::ArityMismatch { expected: self.sites, found: e.slots().len() });
        }
        let total = e.total_sites();
        let mut out = OpMatrix::zeros(total, &self.vars);
        for col in 0..1u32 << total {
            let sub_col = extract_bits(col, total, e.slots()) as usize;
            for sub_row in 0..self.dim() {
                let v = self.get(sub_row, sub_col);
                if v.is_zero() {
                    continue;
                }
                let row = insert_bits(col, total, e.slots(), sub_row as u32);
                out.set(row as usize, col as usize, v.clone());
            }
        }
        Ok(out)
    }

    /// Contracts the input and output index of the 1-based `site`.
    pub fn partial_trace(&self, site: usize) -> Result<OpMatrix> {
        if self.sites < 2 || site == 0 || site > self.sites {
            return Err(Error::SiteOutOfRange { site, sites: self.sites });
        }
        let n = self.sites;
        let rest: Vec<usize> = (1..=n).filter(|&s| s != site).collect();
        let mut out = OpMatrix::zeros(n - 1, &self.vars);
        let small = out.dim() as u32;
        for r in 0..small {
            for c in 0..small {
                let mut acc = MPoly::zero(&self.vars);
                for k in 0..2u32 {
                    let row = insert_bits(insert_bits(0, n, &rest, r), n, &[site], k);
                    let col = insert_bits(insert_bits(0, n, &rest, c), n, &[site], k);
                    let v = self.get(row as usize, col as usize);
                    if !v.is_zero() {
                        acc = &acc + v;
                    }
                }
                out.set(r as usize, c as usize, acc);
            }
        }
        Ok(out)
    }

    /// Full trace.
    pub fn trace(&self) -> MPoly {
        (0..self.dim()).fold(MPoly::zero(&self.vars), |acc, i| &acc + self.get(i, i))
    }

    /// Substitutes the assigned variables in every entry.
    pub fn eval_partial(&self, point: &BTreeMap<String, Rational>) -> OpMatrix {
        self.map_entries(|p| if p.is_zero() { p.clone() } else { p.eval_partial(point) })
    }

    /// Re-expresses all entries over a larger variable table.
    pub fn lift(&self, target: &VarTable) -> Result<OpMatrix> {
        let entries = self.entries.iter().map(|p| p.lift(target)).collect::<Result<_>>()?;
        Ok(OpMatrix { sites: self.sites, vars: target.clone(), entries })
    }

    /// Entries as rationals, failing if any variable remains.
    pub fn to_rationals(&self) -> Result<Vec<Vec<Rational>>> {
        let d = self.dim();
        (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| self.get(r, c).as_constant().ok_or(Error::SymbolicEntries))
                    .collect()
            })
            .collect()
    }

    /// Largest degree of any entry in each variable.
    pub fn max_degree_per_var(&self) -> BTreeMap<String, u32> {
        self.vars
            .names()
            .iter()
            .map(|name| {
                let d = self
                    .entries
                    .iter()
                    .filter_map(|p| match p.degree_in(name).expect("own variable") {
                        Degree::Finite(d) => Some(d),
                        Degree::Zero => None,
                    })
                    .max()
                    .unwrap_or(0);
                (name.clone(), d)
            })
            .collect()
    }

    /// Nonzero entries as `(row multi-index, column multi-index, polynomial)`.
    pub fn dump(&self) -> Vec<Witness> {
        self.nonzero()
            .map(|(r, c, p)| Witness {
                row: MultiIndex::from_code(r as u32, self.sites).bits().to_vec(),
                col: MultiIndex::from_code(c as u32, self.sites).bits().to_vec(),
                poly: p.to_string(),
            })
            .collect()
    }

    /// Determinant. Uses the permutation-sum structure when the matrix is
    /// `P_s + c * P_t` with permutation matrices `P_s`, `P_t`, and falls back
    /// to evaluation and interpolation otherwise.
    pub fn det_symbolic(&self) -> MPoly {
        match self.perm_sum_split() {
            Some((s, t, c)) => det_perm_sum(&s, &t, &c),
            None => self.det_by_interpolation(),
        }
    }

    /// Recognises `P_s + c * P_t`: every column holds a constant 1 and
    /// possibly one further entry, the further entries all equal to the same
    /// non-constant polynomial `c`.
    fn perm_sum_split(&self) -> Option<(Vec<u32>, Vec<u32>, MPoly)> {
        let d = self.dim();
        let mut s = Vec::with_capacity(d);
        let mut t = Vec::with_capacity(d);
        let mut coeff: Option<MPoly> = None;
        for c in 0..d {
            let nz: Vec<(usize, &MPoly)> =
                (0..d).map(|r| (r, self.get(r, c))).filter(|(_, p)| !p.is_zero()).collect();
            let (ones, others): (Vec<_>, Vec<_>) = nz.into_iter().partition(|(_, p)| p.is_one());
            if ones.len() != 1 || others.len() != 1 {
                return None;
            }
            let (tr, tp) = others[0];
            if tp.as_constant().is_some() {
                return None;
            }
            match &coeff {
                None => coeff = Some(tp.clone()),
                Some(k) if k == tp => {}
                Some(_) => return None,
            }
            s.push(ones[0].0 as u32);
            t.push(tr as u32);
        }
        let is_perm = |p: &[u32]| {
            let mut seen = vec![false; p.len()];
            p.iter().all(|&x| !std::mem::replace(&mut seen[x as usize], true))
        };
        (is_perm(&s) && is_perm(&t)).then(|| (s, t, coeff.expect("d >= 1")))
    }

    /// Determinant by exact evaluation on an integer grid followed by
    /// Lagrange interpolation, one variable at a time.
    pub fn det_by_interpolation(&self) -> MPoly {
        let names: Vec<String> = self.vars.names().to_vec();
        // degree bound per variable: sum over rows of the row's max degree
        let bounds: Vec<u32> = names
            .iter()
            .map(|n| {
                (0..self.dim())
                    .map(|r| {
                        (0..self.dim())
                            .filter_map(|c| match self.get(r, c).degree_in(n).expect("own var") {
                                Degree::Finite(d) => Some(d),
                                Degree::Zero => None,
                            })
                            .max()
                            .unwrap_or(0)
                    })
                    .sum()
            })
            .collect();
        interpolate_det(self, &names, &bounds, &BTreeMap::new())
    }
}

fn interpolate_det(
    m: &OpMatrix,
    names: &[String],
    bounds: &[u32],
    fixed: &BTreeMap<String, Rational>,
) -> MPoly {
    let vars = m.vars();
    let Some((name, rest_names)) = names.split_last() else {
        let numeric = m.eval_partial(fixed).to_rationals().expect("all variables fixed");
        return MPoly::constant(vars, det_rational(&numeric));
    };
    let (bound, rest_bounds) = bounds.split_last().expect("bounds match names");
    let nodes: Vec<Rational> = (0..=*bound as i64).map(rat).collect();
    let x = MPoly::var(vars, name).expect("own variable");
    let mut result = MPoly::zero(vars);
    for (i, xi) in nodes.iter().enumerate() {
        let mut point = fixed.clone();
        point.insert(name.clone(), xi.clone());
        let value = interpolate_det(m, rest_names, rest_bounds, &point);
        if value.is_zero() {
            continue;
        }
        let mut basis = MPoly::one(vars);
        for (j, xj) in nodes.iter().enumerate() {
            if i == j {
                continue;
            }
            let factor = &x - &MPoly::constant(vars, xj.clone());
            basis = (&basis * &factor).scale(&(Rational::one() / (xi - xj)));
        }
        result = &result + &(&basis * &value);
    }
    result
}

/// `det(P_s + c P_t) = det(P_s) * det(I + c Q)` with `Q = P_t P_s^{-1}`;
/// each cycle of `Q` of length `L` contributes `1 - (-c)^L`.
fn det_perm_sum(s: &[u32], t: &[u32], c: &MPoly) -> MPoly {
    let vars = c.vars();
    let mut s_inv = vec![0u32; s.len()];
    for (x, &y) in s.iter().enumerate() {
        s_inv[y as usize] = x as u32;
    }
    let q: Vec<u32> = (0..s.len()).map(|y| t[s_inv[y] as usize]).collect();
    let neg_c = -c;
    let mut det = MPoly::constant(vars, rat(perm_sign(s)));
    for len in cycle_lengths(&q) {
        let factor = &MPoly::one(vars) - &neg_c.pow(len as u32);
        det = &det * &factor;
    }
    det
}

fn cycle_lengths(p: &[u32]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
            len += 1;
        }
        out.push(len);
    }
    out
}

/// Sign of a permutation given as an image table.
pub fn perm_sign(p: &[u32]) -> i64 {
    let even = cycle_lengths(p).iter().filter(|&&l| l % 2 == 0).count();
    if even % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Fraction-free (Bareiss) elimination. Returns the rank and, for square
/// full-rank input, the determinant.
fn bareiss(rows: &[Vec<Rational>]) -> (usize, Rational) {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let n = a.len();
    let m = a.first().map_or(0, Vec::len);
    let mut sign = Rational::one();
    let mut prev = Rational::one();
    let mut rank = 0;
    for col in 0..m {
        if rank == n {
            break;
        }
        let Some(p) = (rank..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            sign = -sign;
        }
        let pivot = a[rank][col].clone();
        let (top, bottom) = a.split_at_mut(rank + 1);
        for row in bottom {
            let factor = row[col].clone();
            for (x, y) in row[col..].iter_mut().zip(&top[rank][col..]) {
                *x = (&pivot * &*x - &factor * y) / &prev;
            }
        }
        prev = pivot;
        rank += 1;
    }
    let det = if rank == n && n == m { sign * prev } else { Rational::zero() };
    (rank, det)
}

pub fn rank_of(rows: &[Vec<Rational>]) -> usize {
    bareiss(rows).0
}

pub fn det_rational(rows: &[Vec<Rational>]) -> Rational {
    if rows.is_empty() {
        return Rational::one();
    }
    bareiss(rows).1
}

/// Rank over the rationals of a matrix without symbolic entries.
pub fn rank_rational(m: &OpMatrix) -> Result<usize> {
    Ok(rank_of(&m.to_rationals()?))
}

/// True when every entry is a nonnegative or zero constant — used for
/// Boltzmann-weight tables.
pub fn all_constants_nonnegative(m: &OpMatrix) -> bool {
    m.entries.iter().all(|p| p.as_constant().is_some_and(|c| !c.is_negative()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitlinalg::{named, AffineBitMap};
    use crate::polyring::frac;

    fn avar() -> (VarTable, MPoly) {
        let vars = VarTable::new(["a"]).unwrap();
        let a = MPoly::var(&vars, "a").unwrap();
        (vars, a)
    }

    fn r3(vars: &VarTable, c: &MPoly) -> OpMatrix {
        let s = OpMatrix::from_perm(&named::s3().to_perm(), vars);
        let t = OpMatrix::from_perm(&named::t3().to_perm(), vars);
        OpMatrix::linear_comb(&s, &t, c).unwrap()
    }

    #[test]
    fn swap_matrix() {
        let vars = VarTable::empty();
        let m = OpMatrix::from_perm(&named::s2().to_perm(), &vars);
        let expected: Vec<Vec<Rational>> = [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect();
        assert_eq!(m.to_rationals().unwrap(), expected);
        let id = OpMatrix::from_perm(&AffineBitMap::identity(3).to_perm(), &vars);
        assert_eq!(id, OpMatrix::identity(3, &vars));
    }

    #[test]
    fn t3_column_of_zero() {
        let vars = VarTable::empty();
        let m = OpMatrix::from_perm(&named::t3().to_perm(), &vars);
        assert!(m.get(0b111, 0).is_one());
        for c in 0..8 {
            let ones = (0..8).filter(|&r| m.get(r, c).is_one()).count();
            assert_eq!(ones, 1);
            assert_eq!(m.nonzero().filter(|&(_, cc, _)| cc == c).count(), 1);
        }
    }

    #[test]
    fn sixteen_vertices() {
        let (vars, a) = avar();
        let r = r3(&vars, &a);
        assert_eq!(r.count_nonzero(), 16);
        assert_eq!(r.nonzero().filter(|(_, _, p)| p.is_one()).count(), 8);
        assert_eq!(r.nonzero().filter(|(_, _, p)| **p == a).count(), 8);
        let s = OpMatrix::from_perm(&named::s3().to_perm(), &vars);
        assert_eq!(r3(&vars, &MPoly::zero(&vars)), s);
    }

    #[test]
    fn embed_identity_and_trivial() {
        let vars = VarTable::empty();
        let e = SlotEmbedding::new(6, vec![1, 4, 5]).unwrap();
        assert_eq!(OpMatrix::identity(3, &vars).embed(&e).unwrap(), OpMatrix::identity(6, &vars));
        let t2 = OpMatrix::from_perm(&named::t2().to_perm(), &vars);
        let e = SlotEmbedding::new(2, vec![1, 2]).unwrap();
        assert_eq!(t2.embed(&e).unwrap(), t2);
    }

    #[test]
    fn embed_reversed_slots_conjugates_by_swap() {
        let vars = VarTable::empty();
        let t = OpMatrix::from_perm(&named::t3().to_perm(), &vars);
        let fwd = t.embed(&SlotEmbedding::new(2, vec![1, 2]).unwrap());
        assert!(fwd.is_err());
        let s2 = OpMatrix::from_perm(&named::s2().to_perm(), &vars);
        let m = OpMatrix::from_perm(&AffineBitMap::new(&[vec![1, 1], vec![0, 1]], &[0, 0]).unwrap().to_perm(), &vars);
        let rev = m.embed(&SlotEmbedding::new(2, vec![2, 1]).unwrap()).unwrap();
        assert_eq!(rev, s2.matmul(&m).unwrap().matmul(&s2).unwrap());
    }

    #[test]
    fn slot_errors() {
        assert_eq!(SlotEmbedding::new(3, vec![1, 4]), Err(Error::SlotOutOfRange { slot: 4, total: 3 }));
        assert_eq!(SlotEmbedding::new(3, vec![2, 2]), Err(Error::DuplicateSlot(2)));
        assert!(SlotEmbedding::new(3, vec![0]).is_err());
    }

    #[test]
    fn matmul_examples() {
        let vars = VarTable::empty();
        let s = OpMatrix::from_perm(&named::s3().to_perm(), &vars);
        let mut inv = vec![0u32; 8];
        for x in 0..8u32 {
            inv[named::s3().apply_code(x) as usize] = x;
        }
        let s_inv = OpMatrix::from_perm(&PermOperator::from_table(3, inv).unwrap(), &vars);
        assert_eq!(s.matmul(&s_inv).unwrap(), OpMatrix::identity(3, &vars));

        let (avars, a) = avar();
        let r = r3(&avars, &a);
        let sq = r.matmul(&r).unwrap();
        assert!(sq.max_degree_per_var()["a"] <= 2);
        assert_eq!(sq.max_degree_per_var()["a"], 2);

        let lam = VarTable::new(["lam"]).unwrap();
        let s2 = OpMatrix::from_perm(&named::s2().to_perm(), &lam);
        let t2 = OpMatrix::from_perm(&named::t2().to_perm(), &lam);
        let rl = OpMatrix::linear_comb(&s2, &t2, &MPoly::var(&lam, "lam").unwrap()).unwrap();
        let at0 = rl.eval_partial(&[("lam".to_string(), rat(0))].into());
        assert_eq!(at0.matmul(&at0).unwrap(), OpMatrix::identity(2, &lam));

        let other = OpMatrix::identity(2, &VarTable::new(["x"]).unwrap());
        assert_eq!(rl.matmul(&other), Err(Error::VarTableMismatch));
        assert!(matches!(rl.matmul(&OpMatrix::identity(3, &lam)), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn partial_trace_of_h4() {
        let vars = VarTable::empty();
        let h = OpMatrix::from_perm(&named::h4().to_perm(), &vars);
        let traced = h.partial_trace(4).unwrap();
        assert_eq!(traced, r3(&vars, &MPoly::one(&vars)));
    }

    #[test]
    fn partial_trace_identity_and_errors() {
        let vars = VarTable::empty();
        for site in 1..=3 {
            let t = OpMatrix::identity(3, &vars).partial_trace(site).unwrap();
            assert_eq!(t, OpMatrix::identity(2, &vars).scale(&MPoly::constant(&vars, rat(2))).unwrap());
        }
        assert!(matches!(OpMatrix::identity(3, &vars).partial_trace(4), Err(Error::SiteOutOfRange { .. })));
        assert!(OpMatrix::identity(1, &vars).partial_trace(1).is_err());
    }

    #[test]
    fn traced_permutation_counts_fixed_points() {
        let vars = VarTable::empty();
        for m in [named::s3(), named::t3(), named::h4()] {
            let p = m.to_perm();
            let fixed = (0..1u32 << p.arity()).filter(|&x| p.image(x) == x).count() as i64;
            let mut mat = OpMatrix::from_perm(&p, &vars);
            while mat.sites() > 1 {
                mat = mat.partial_trace(1).unwrap();
            }
            assert_eq!(mat.trace().as_constant(), Some(rat(fixed)));
            assert_eq!(OpMatrix::from_perm(&p, &vars).trace().as_constant(), Some(rat(fixed)));
        }
    }

    #[test]
    fn ranks() {
        let vars = VarTable::empty();
        assert_eq!(rank_rational(&r3(&vars, &MPoly::one(&vars))).unwrap(), 4);
        assert_eq!(rank_rational(&OpMatrix::identity(3, &vars)).unwrap(), 8);
        assert_eq!(rank_rational(&r3(&vars, &MPoly::constant(&vars, rat(2)))).unwrap(), 8);
        let (avars, a) = avar();
        assert_eq!(rank_rational(&r3(&avars, &a)), Err(Error::SymbolicEntries));
    }

    #[test]
    fn determinants() {
        let (vars, a) = avar();
        let one = MPoly::one(&vars);
        let base = &one - &a.pow(2);
        assert_eq!(r3(&vars, &a).det_symbolic(), base.pow(4));

        let lam = VarTable::new(["lam"]).unwrap();
        let l = MPoly::var(&lam, "lam").unwrap();
        let s2 = OpMatrix::from_perm(&named::s2().to_perm(), &lam);
        let t2 = OpMatrix::from_perm(&named::t2().to_perm(), &lam);
        let r2 = OpMatrix::linear_comb(&s2, &t2, &l).unwrap();
        let base2 = &MPoly::one(&lam) - &l.pow(2);
        assert_eq!(r2.det_symbolic(), -base2.pow(2));

        assert!(OpMatrix::identity(4, &vars).det_symbolic().is_one());
    }

    #[test]
    fn interpolation_matches_structured_route() {
        let (vars, a) = avar();
        let r = r3(&vars, &a);
        assert_eq!(r.det_by_interpolation(), r.det_symbolic());
        // a matrix without permutation-sum structure, two variables
        let xy = VarTable::new(["x", "y"]).unwrap();
        let x = MPoly::var(&xy, "x").unwrap();
        let y = MPoly::var(&xy, "y").unwrap();
        let mut m = OpMatrix::zeros(1, &xy);
        m.set(0, 0, x.clone());
        m.set(0, 1, &y + &MPoly::constant(&xy, frac(1, 2)));
        m.set(1, 0, y.clone());
        m.set(1, 1, &x * &y);
        let expected = &(&x.pow(2) * &y) - &(&y.pow(2) + &y.scale(&frac(1, 2)));
        assert_eq!(m.det_symbolic(), expected);
    }

    #[test]
    fn bareiss_small() {
        let m = vec![vec![rat(2), rat(1)], vec![rat(4), rat(2)]];
        assert_eq!(rank_of(&m), 1);
        assert_eq!(det_rational(&m), rat(0));
        let m = vec![vec![rat(0), rat(3)], vec![frac(1, 2), rat(7)]];
        assert_eq!(det_rational(&m), frac(-3, 2));
    }

    #[test]
    fn weight_table_nonnegative_for_positive_a() {
        let vars = VarTable::empty();
        assert!(all_constants_nonnegative(&r3(&vars, &MPoly::constant(&vars, frac(1, 3)))));
        assert!(!all_constants_nonnegative(&r3(&vars, &MPoly::constant(&vars, rat(-1)))));
    }
}

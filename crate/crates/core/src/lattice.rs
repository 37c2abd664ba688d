//! Row transfer matrices of the two-dimensional model and exhaustive
//! partition functions of the three-dimensional sixteen-vertex model.

use std::collections::HashMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::bitlinalg::named;
use crate::error::{Error, Result};
use crate::opmatrix::{OpMatrix, SlotEmbedding};
use crate::polyring::{MPoly, Rational, VarTable};
use crate::report::{Report, Status, MAX_WITNESSES};
use crate::simplexcheck::{local_operator, random_rational};

pub const MAX_CHAIN: usize = 6;
/// Longest chain for which the symbolic commutator is attempted.
pub const MAX_SYMBOLIC_CHAIN: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainSpec {
    n_sites: usize,
}

impl ChainSpec {
    pub fn new(n_sites: usize) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::Invalid("chain needs at least one site".into()));
        }
        if n_sites > MAX_CHAIN {
            return Err(Error::ChainTooLong(n_sites, MAX_CHAIN));
        }
        Ok(ChainSpec { n_sites })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }
}

/// `R(c) = S + c T` on two sites.
pub fn r2(coeff: &MPoly) -> OpMatrix {
    local_operator(&named::s2(), coeff)
}

/// Traces the auxiliary space (site 1) out of `R_{a,n} ... R_{a,1}`, the
/// local operator acting on the auxiliary space and chain site `j`.
pub fn row_transfer_with(chain: ChainSpec, local: &OpMatrix) -> Result<OpMatrix> {
    if local.sites() != 2 {
        return Err(Error::ArityMismatch { expected: 2, found: local.sites() });
    }
    let n = chain.n_sites();
    let total = n + 1;
    let mut monodromy = OpMatrix::identity(total, local.vars());
    for j in (1..=n).rev() {
        let e = local.embed(&SlotEmbedding::new(total, vec![1, j + 1])?)?;
        monodromy = monodromy.matmul(&e)?;
    }
    monodromy.partial_trace(1)
}

pub fn row_transfer(chain: ChainSpec, coeff: &MPoly) -> Result<OpMatrix> {
    row_transfer_with(chain, &r2(coeff))
}

/// `[T(mu), T(nu)]` for transfer matrices built from `local(mu)` and
/// `local(nu)` over the table `(mu, nu)`.
pub fn commutator_with(chain: ChainSpec, local: &dyn Fn(&MPoly) -> Result<OpMatrix>) -> Result<OpMatrix> {
    let vars = VarTable::new(["mu", "nu"]).expect("distinct");
    let mu = MPoly::var(&vars, "mu")?;
    let nu = MPoly::var(&vars, "nu")?;
    let tm = row_transfer_with(chain, &local(&mu)?)?;
    let tn = row_transfer_with(chain, &local(&nu)?)?;
    tm.matmul(&tn)?.sub(&tn.matmul(&tm)?)
}

fn commutator_report(check: &str, chain: ChainSpec, c: &OpMatrix, started: Instant) -> Report {
    let status = if c.is_zero() { Status::Certified } else { Status::Fail };
    let mut report = Report::new(check, status);
    report.witnesses = c.dump().into_iter().take(MAX_WITNESSES).collect();
    report.max_degree_per_var = c.max_degree_per_var();
    report.details = Some(json!({ "sites": chain.n_sites(), "nonzero_entries": c.count_nonzero() }));
    report.finish(started)
}

/// Symbolic check that the row transfer matrices of `S + mu T` and
/// `S + nu T` commute as polynomial matrices.
pub fn transfer_commutator(chain: ChainSpec) -> Result<Report> {
    let started = Instant::now();
    if chain.n_sites() > MAX_SYMBOLIC_CHAIN {
        return Err(Error::ChainTooLong(chain.n_sites(), MAX_SYMBOLIC_CHAIN));
    }
    let c = commutator_with(chain, &|p| Ok(r2(p)))?;
    Ok(commutator_report("transfer-commute", chain, &c, started))
}

/// A fixed random 4x4 rational matrix, used to perturb `S + c T` into
/// `S + c T + c^2 E`.
pub fn perturbation(vars: &VarTable, seed: u64) -> OpMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<Rational>> = (0..4).map(|_| (0..4).map(|_| random_rational(&mut rng)).collect()).collect();
    OpMatrix::from_rationals(2, vars, &rows).expect("4x4")
}

/// Commutator for the perturbed operator; expected to be nonzero.
pub fn perturbed_commutator(chain: ChainSpec, seed: u64) -> Result<Report> {
    let started = Instant::now();
    let local = |p: &MPoly| -> Result<OpMatrix> {
        let e = perturbation(p.vars(), seed);
        r2(p).add(&e.scale(&p.pow(2))?)
    };
    let c = commutator_with(chain, &local)?;
    let mut report = commutator_report("transfer-commute-perturbed", chain, &c, started);
    report.seed = Some(seed);
    Ok(report)
}

/// Checks `R_12 L_13 M_23 = M_23 L_13 R_12` on three sites.
pub fn rlm_check(r: &OpMatrix, l: &OpMatrix, m: &OpMatrix) -> Result<Report> {
    let started = Instant::now();
    for op in [r, l, m] {
        if op.sites() != 2 {
            return Err(Error::DimMismatch { left: 4, right: op.dim() });
        }
    }
    let e = |op: &OpMatrix, slots: [usize; 2]| op.embed(&SlotEmbedding::new(3, slots.to_vec())?);
    let (r12, l13, m23) = (e(r, [1, 2])?, e(l, [1, 3])?, e(m, [2, 3])?);
    let lhs = r12.matmul(&l13)?.matmul(&m23)?;
    let rhs = m23.matmul(&l13)?.matmul(&r12)?;
    let diff = lhs.sub(&rhs)?;
    let status = if diff.is_zero() { Status::Pass } else { Status::Fail };
    let mut report = Report::new("rlm", status);
    report.witnesses = diff.dump().into_iter().take(MAX_WITNESSES).collect();
    report.max_degree_per_var = diff.max_degree_per_var();
    Ok(report.finish(started))
}

/// Periodic `Lx x Ly x Lz` lattice. Edges along lattice axis `d` carry
/// operator slot `axis_slots[d]` at every vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lattice3D {
    dims: [usize; 3],
    axis_slots: [usize; 3],
}

pub const MAX_VERTICES: usize = 8;
pub const MAX_EDGES: usize = 27;

impl Lattice3D {
    pub fn new(dims: [usize; 3]) -> Result<Self> {
        Self::with_axis_slots(dims, [0, 1, 2])
    }

    pub fn with_axis_slots(dims: [usize; 3], axis_slots: [usize; 3]) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::Invalid(format!("dimensions {dims:?} must be positive")));
        }
        let mut sorted = axis_slots;
        sorted.sort_unstable();
        if sorted != [0, 1, 2] {
            return Err(Error::Invalid(format!("{axis_slots:?} is not a permutation of the axes")));
        }
        let v: usize = dims.iter().product();
        if v > MAX_VERTICES || 3 * v > MAX_EDGES {
            return Err(Error::LatticeTooLarge(format!("{dims:?} has {v} vertices and {} edges", 3 * v)));
        }
        Ok(Lattice3D { dims, axis_slots })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn num_vertices(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn num_edges(&self) -> usize {
        3 * self.num_vertices()
    }

    fn vertex(&self, x: usize, y: usize, z: usize) -> usize {
        (x * self.dims[1] + y) * self.dims[2] + z
    }

    /// Per vertex, edge indices of the incoming and outgoing edge for each
    /// operator slot. Edge `3 v + d` leaves vertex `v` along axis `d`.
    fn incidence(&self) -> Vec<([usize; 3], [usize; 3])> {
        let [lx, ly, lz] = self.dims;
        let mut out = Vec::with_capacity(self.num_vertices());
        for x in 0..lx {
            for y in 0..ly {
                for z in 0..lz {
                    let v = self.vertex(x, y, z);
                    let prev = [
                        self.vertex((x + lx - 1) % lx, y, z),
                        self.vertex(x, (y + ly - 1) % ly, z),
                        self.vertex(x, y, (z + lz - 1) % lz),
                    ];
                    let mut inc = [0; 3];
                    let mut outg = [0; 3];
                    for d in 0..3 {
                        inc[self.axis_slots[d]] = 3 * prev[d] + d;
                        outg[self.axis_slots[d]] = 3 * v + d;
                    }
                    out.push((inc, outg));
                }
            }
        }
        out
    }
}

/// Weights `S + coeff T` of the sixteen-vertex model.
pub fn sixteen_vertex_weights(coeff: &MPoly) -> OpMatrix {
    local_operator(&named::s3(), coeff)
}

/// Sum over all edge colorings of the product of vertex weights
/// `W[out, in]`. Incoming edges (from the `-x, -y, -z` neighbours) form the
/// column multi-index, outgoing edges the row, both in slot order.
pub fn partition_3d(lat: &Lattice3D, weights: &OpMatrix) -> Result<MPoly> {
    if weights.sites() != 3 {
        return Err(Error::ArityMismatch { expected: 3, found: weights.sites() });
    }
    let vars = weights.vars().clone();
    let mut distinct: Vec<MPoly> = Vec::new();
    let mut table = [0u8; 64];
    for (row, col, w) in weights.nonzero() {
        let id = match distinct.iter().position(|d| d == w) {
            Some(i) => i,
            None => {
                distinct.push(w.clone());
                distinct.len() - 1
            }
        };
        table[row * 8 + col] = id as u8 + 1;
    }
    let v = lat.num_vertices() as u64;
    // a histogram over weight ids, packed in base v + 1
    let radix: Vec<u64> = (0..distinct.len()).map(|i| (v + 1).pow(i as u32)).collect();
    let incidence = lat.incidence();
    let edges = lat.num_edges();
    let total: u64 = 1 << edges;
    let chunk = 1u64 << edges.saturating_sub(8);

    let histogram: HashMap<u64, u64> = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut local: HashMap<u64, u64> = HashMap::new();
            'config: for coloring in c * chunk..((c + 1) * chunk).min(total) {
                let mut key = 0u64;
                for (inc, outg) in &incidence {
                    let bit = |e: usize| ((coloring >> e) & 1) as usize;
                    let col = (bit(inc[0]) << 2) | (bit(inc[1]) << 1) | bit(inc[2]);
                    let row = (bit(outg[0]) << 2) | (bit(outg[1]) << 1) | bit(outg[2]);
                    match table[row * 8 + col] {
                        0 => continue 'config,
                        id => key += radix[id as usize - 1],
                    }
                }
                *local.entry(key).or_insert(0) += 1;
            }
            local
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, n) in b {
                *a.entry(k).or_insert(0) += n;
            }
            a
        });

    let mut z = MPoly::zero(&vars);
    let mut keys: Vec<_> = histogram.into_iter().collect();
    keys.sort_unstable();
    for (key, count) in keys {
        let mut term = MPoly::constant(&vars, Rational::from_integer(count.into()));
        let mut k = key;
        for w in &distinct {
            term = &term * &w.pow((k % (v + 1)) as u32);
            k /= v + 1;
        }
        z = &z + &term;
    }
    Ok(z)
}

/// `a,Z(a)` lines for the given sample values of `a`, from the symbolic
/// partition function.
pub fn partition_csv(lat: &Lattice3D, samples: &[Rational]) -> Result<String> {
    let vars = VarTable::new(["a"]).expect("one name");
    let z = partition_3d(lat, &sixteen_vertex_weights(&MPoly::var(&vars, "a")?))?;
    let mut out = String::from("a,Z\n");
    for a in samples {
        out.push_str(&format!("{a},{}\n", z.eval_slice(std::slice::from_ref(a))?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitlinalg::PermOperator;
    use crate::polyring::{frac, rat};

    fn avar() -> (VarTable, MPoly) {
        let vars = VarTable::new(["a"]).unwrap();
        let a = MPoly::var(&vars, "a").unwrap();
        (vars, a)
    }

    fn shift(n: usize) -> PermOperator {
        // (x1, ..., xn) -> (xn, x1, ..., x(n-1))
        let table = (0..1u32 << n).map(|x| (x >> 1) | ((x & 1) << (n - 1))).collect();
        PermOperator::from_table(n, table).unwrap()
    }

    #[test]
    fn chain_limits() {
        assert!(ChainSpec::new(0).is_err());
        assert_eq!(ChainSpec::new(7), Err(Error::ChainTooLong(7, MAX_CHAIN)));
        assert!(transfer_commutator(ChainSpec::new(5).unwrap()).is_err());
    }

    #[test]
    fn single_site_transfer() {
        let vars = VarTable::new(["mu"]).unwrap();
        let mu = MPoly::var(&vars, "mu").unwrap();
        let t = row_transfer(ChainSpec::new(1).unwrap(), &mu).unwrap();
        assert_eq!(t.dim(), 2);
        let at0 = t.eval_partial(&[("mu".to_string(), rat(0))].into());
        assert_eq!(at0, OpMatrix::identity(1, &vars));
    }

    #[test]
    fn transfer_at_zero_is_translation() {
        let vars = VarTable::empty();
        for n in 1..=4 {
            let t = row_transfer(ChainSpec::new(n).unwrap(), &MPoly::zero(&vars)).unwrap();
            assert_eq!(t, OpMatrix::from_perm(&shift(n), &vars), "n = {n}");
        }
    }

    #[test]
    fn degree_bound_and_singular_point() {
        let vars = VarTable::new(["mu"]).unwrap();
        let mu = MPoly::var(&vars, "mu").unwrap();
        let t = row_transfer(ChainSpec::new(2).unwrap(), &mu).unwrap();
        assert!(t.max_degree_per_var()["mu"] <= 2);
        let one = VarTable::empty();
        assert!(r2(&MPoly::one(&one)).det_symbolic().is_zero());
        let t1 = row_transfer(ChainSpec::new(2).unwrap(), &MPoly::one(&one)).unwrap();
        let at1 = t.eval_partial(&[("mu".to_string(), rat(1))].into());
        assert_eq!(t1.to_rationals().unwrap(), at1.to_rationals().unwrap());
        assert!(!t1.is_zero());
    }

    #[test]
    fn commuting_transfer_matrices() {
        for n in 1..=3 {
            let r = transfer_commutator(ChainSpec::new(n).unwrap()).unwrap();
            assert_eq!(r.status, Status::Certified, "n = {n}");
        }
        let p = perturbed_commutator(ChainSpec::new(2).unwrap(), 11).unwrap();
        assert_eq!(p.status, Status::Fail);
    }

    #[test]
    fn commutator_survives_cyclic_relabeling() {
        let chain = ChainSpec::new(3).unwrap();
        let c = commutator_with(chain, &|p| Ok(r2(p))).unwrap();
        let vars = c.vars().clone();
        let p = OpMatrix::from_perm(&shift(3), &vars);
        let mut inv = vec![0u32; 8];
        for x in 0..8u32 {
            inv[shift(3).image(x) as usize] = x;
        }
        let pinv = OpMatrix::from_perm(&PermOperator::from_table(3, inv).unwrap(), &vars);
        assert!(p.matmul(&c).unwrap().matmul(&pinv).unwrap().is_zero());
    }

    #[test]
    fn rlm_examples() {
        let vars = VarTable::empty();
        let k = |x: Rational| r2(&MPoly::constant(&vars, x));
        let s = k(rat(0));
        assert_eq!(rlm_check(&s, &s, &s).unwrap().status, Status::Pass);
        let good = rlm_check(&k(frac(1, 3)), &k(frac(1, 2)), &k(frac(1, 5))).unwrap();
        assert_eq!(good.status, Status::Pass);
        let bad = rlm_check(&k(rat(1)), &k(rat(2)), &k(rat(3))).unwrap();
        assert_eq!(bad.status, Status::Fail);
        assert!(!bad.witnesses.is_empty());
        assert!(rlm_check(&sixteen_vertex_weights(&MPoly::zero(&vars)), &s, &s).is_err());
    }

    #[test]
    fn single_cell_partition() {
        let (vars, a) = avar();
        let lat = Lattice3D::new([1, 1, 1]).unwrap();
        let z = partition_3d(&lat, &sixteen_vertex_weights(&a)).unwrap();
        assert_eq!(z, &MPoly::constant(&vars, rat(4)) + &a.scale(&rat(4)));
        let zero = VarTable::empty();
        let z0 = partition_3d(&lat, &sixteen_vertex_weights(&MPoly::zero(&zero))).unwrap();
        assert_eq!(z0.as_constant(), Some(rat(4)));
    }

    #[test]
    fn small_lattice_values() {
        let (vars, a) = avar();
        let w = sixteen_vertex_weights(&a);
        let c = |k: i64| MPoly::constant(&vars, rat(k));
        let z = partition_3d(&Lattice3D::new([1, 1, 2]).unwrap(), &w).unwrap();
        assert_eq!(z, &(&c(8) + &a.scale(&rat(16))) + &a.pow(2).scale(&rat(8)));
    }

    #[test]
    fn lattice_limits() {
        assert!(Lattice3D::new([3, 3, 1]).is_err());
        assert!(Lattice3D::new([0, 1, 1]).is_err());
        assert!(Lattice3D::with_axis_slots([1, 1, 1], [0, 0, 2]).is_err());
        assert!(Lattice3D::new([2, 2, 2]).is_ok());
    }

    #[test]
    fn csv_output() {
        let lat = Lattice3D::new([1, 1, 1]).unwrap();
        let csv = partition_csv(&lat, &[frac(1, 2), rat(2)]).unwrap();
        assert_eq!(csv, "a,Z\n1/2,6\n2,12\n");
    }
}

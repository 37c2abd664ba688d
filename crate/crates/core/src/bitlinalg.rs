//! Two-color multi-indices, affine maps over GF(2) and the permutation-type
//! operators they define, together with the slot bookkeeping of n-simplex
//! equations.
//!
//! Multi-indices are encoded big-endian: the first tensor factor is the most
//! significant bit of the integer code. Every module relies on this.

use std::fmt;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::report::{Report, Status, Witness, MAX_WITNESSES};

/// Largest arity handled by the bit-mask representation.
pub const MAX_ARITY: usize = 24;

/// Extracts the bits of `state` (on `total` sites) at the 1-based `slots`,
/// packed big-endian in slot order.
pub fn extract_bits(state: u32, total: usize, slots: &[usize]) -> u32 {
    slots
        .iter()
        .fold(0, |acc, &s| (acc << 1) | ((state >> (total - s)) & 1))
}

/// Overwrites the bits of `state` at `slots` with the big-endian packed `sub`.
pub fn insert_bits(state: u32, total: usize, slots: &[usize], sub: u32) -> u32 {
    let n = slots.len();
    slots.iter().enumerate().fold(state, |acc, (k, &s)| {
        let bit = (sub >> (n - 1 - k)) & 1;
        let shift = total - s;
        (acc & !(1 << shift)) | (bit << shift)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Invalid("multi-index must be non-empty".into()));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Invalid(format!("color {b} is not 0 or 1")));
        }
        Ok(MultiIndex(bits))
    }

    pub fn from_code(code: u32, n: usize) -> Self {
        MultiIndex((0..n).map(|k| ((code >> (n - 1 - k)) & 1) as u8).collect())
    }

    pub fn code(&self) -> u32 {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | u32::from(b))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// The pair `[A|B]`: `x -> A x + B` over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineBitMap {
    /// `rows[k]` holds row k of A as a big-endian mask over the input bits.
    rows: Vec<u32>,
    /// B packed big-endian.
    offset: u32,
}

impl AffineBitMap {
    pub fn new(a: &[Vec<u8>], b: &[u8]) -> Result<Self> {
        let n = a.len();
        if n == 0 || n > MAX_ARITY {
            return Err(Error::Invalid(format!("arity {n} not in 1..={MAX_ARITY}")));
        }
        if b.len() != n {
            return Err(Error::ArityMismatch { expected: n, found: b.len() });
        }
        let mut rows = Vec::with_capacity(n);
        for row in a {
            if row.len() != n {
                return Err(Error::ArityMismatch { expected: n, found: row.len() });
            }
            rows.push(MultiIndex::new(row.clone())?.code());
        }
        let offset = MultiIndex::new(b.to_vec())?.code();
        Ok(AffineBitMap { rows, offset })
    }

    pub fn identity(n: usize) -> Self {
        AffineBitMap {
            rows: (0..n).map(|k| 1 << (n - 1 - k)).collect(),
            offset: 0,
        }
    }

    pub fn arity(&self) -> usize {
        self.rows.len()
    }

    pub fn matrix(&self) -> Vec<Vec<u8>> {
        let n = self.arity();
        self.rows.iter().map(|&r| MultiIndex::from_code(r, n).0).collect()
    }

    pub fn offset(&self) -> Vec<u8> {
        MultiIndex::from_code(self.offset, self.arity()).0
    }

    /// Same linear part, offset complemented: the map followed by flipping
    /// every color.
    pub fn flipped(&self) -> Self {
        let n = self.arity();
        let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        AffineBitMap {
            rows: self.rows.clone(),
            offset: self.offset ^ all,
        }
    }

    pub fn apply_code(&self, x: u32) -> u32 {
        let n = self.arity();
        self.rows.iter().enumerate().fold(self.offset, |acc, (k, &r)| {
            acc ^ (((r & x).count_ones() & 1) << (n - 1 - k))
        })
    }

    pub fn apply(&self, x: &MultiIndex) -> Result<MultiIndex> {
        if x.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: x.len() });
        }
        Ok(MultiIndex::from_code(self.apply_code(x.code()), self.arity()))
    }

    /// Determinant of A over GF(2).
    pub fn det2(&self) -> u8 {
        let n = self.arity();
        let mut rows = self.rows.clone();
        for col in 0..n {
            let bit = 1 << (n - 1 - col);
            let Some(p) = (col..n).find(|&r| rows[r] & bit != 0) else {
                return 0;
            };
            rows.swap(col, p);
            for r in 0..n {
                if r != col && rows[r] & bit != 0 {
                    rows[r] ^= rows[col];
                }
            }
        }
        1
    }

    pub fn is_invertible(&self) -> bool {
        self.det2() == 1
    }

    pub fn to_perm(&self) -> PermOperator {
        PermOperator::from_map(self)
    }
}

/// Parses the `[A|B]` text format: one row per output index, `n` bits
/// separated by whitespace, a `|`, then one bit. Lines starting with `#` and
/// blank lines are skipped.
pub fn parse_ab(text: &str) -> Result<AffineBitMap> {
    let mut a: Vec<Vec<u8>> = Vec::new();
    let mut b: Vec<u8> = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        last_line = line_no;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let mut parts = line.split('|');
        let (lhs, rhs) = match (parts.next(), parts.next(), parts.next()) {
            (Some(l), Some(r), None) => (l, r),
            _ => return Err(err("expected exactly one `|`".into())),
        };
        let bit = |tok: &str| match tok {
            "0" => Ok(0u8),
            "1" => Ok(1u8),
            other => Err(err(format!("`{other}` is not a bit"))),
        };
        let row: Vec<u8> = lhs.split_whitespace().map(bit).collect::<Result<_>>()?;
        if row.is_empty() {
            return Err(err("row has no matrix entries".into()));
        }
        let rhs_toks: Vec<&str> = rhs.split_whitespace().collect();
        if rhs_toks.len() != 1 {
            return Err(err(format!("expected one offset bit, found {}", rhs_toks.len())));
        }
        if let Some(first) = a.first() {
            if row.len() != first.len() {
                return Err(err(format!("row has {} entries, expected {}", row.len(), first.len())));
            }
        }
        b.push(bit(rhs_toks[0])?);
        a.push(row);
    }
    let Some(first) = a.first() else {
        return Err(Error::Parse { line: last_line.max(1), msg: "no rows".into() });
    };
    if first.len() != a.len() {
        return Err(Error::Parse {
            line: last_line,
            msg: format!("{} rows for a {}-column matrix", a.len(), first.len()),
        });
    }
    AffineBitMap::new(&a, &b)
}

/// Writes the `[A|B]` text format read by [`parse_ab`].
pub fn write_ab(m: &AffineBitMap) -> String {
    let mut out = String::new();
    for (row, b) in m.matrix().iter().zip(m.offset()) {
        let cells: Vec<String> = row.iter().map(u8::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('|');
        out.push_str(&b.to_string());
        out.push('\n');
    }
    out
}

/// A permutation-type operator given by its action on encoded basis states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermOperator {
    n: usize,
    table: Vec<u32>,
}

impl PermOperator {
    pub fn from_map(m: &AffineBitMap) -> Self {
        let n = m.arity();
        PermOperator {
            n,
            table: (0..1u32 << n).map(|x| m.apply_code(x)).collect(),
        }
    }

    pub fn from_table(n: usize, table: Vec<u32>) -> Result<Self> {
        if table.len() != 1 << n {
            return Err(Error::DimMismatch { left: 1 << n, right: table.len() });
        }
        if let Some(&bad) = table.iter().find(|&&y| y >> n != 0) {
            return Err(Error::Invalid(format!("image {bad} out of range")));
        }
        Ok(PermOperator { n, table })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn image(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.table.len()];
        self.table
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y as usize], true))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PermOperator) -> Result<PermOperator> {
        if self.n != other.n {
            return Err(Error::ArityMismatch { expected: self.n, found: other.n });
        }
        Ok(PermOperator {
            n: self.n,
            table: other.table.iter().map(|&y| self.table[y as usize]).collect(),
        })
    }
}

/// Spaces and slots of the n-simplex equation. Spaces are the 2-subsets of
/// `{1, ..., n+1}` in lexicographic order; operator `k` acts on the spaces
/// whose subset contains `k`, in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexScheme {
    n: usize,
    spaces: Vec<(usize, usize)>,
    slots: Vec<Vec<usize>>,
}

impl SimplexScheme {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid(format!("simplex order {n} must be at least 2")));
        }
        let spaces: Vec<(usize, usize)> = (1..=n + 1)
            .flat_map(|i| (i + 1..=n + 1).map(move |j| (i, j)))
            .collect();
        if spaces.len() > MAX_ARITY {
            return Err(Error::Invalid(format!("{}-simplex needs too many spaces", n)));
        }
        let slots = (1..=n + 1)
            .map(|k| {
                spaces
                    .iter()
                    .enumerate()
                    .filter(|(_, &(i, j))| i == k || j == k)
                    .map(|(pos, _)| pos + 1)
                    .collect()
            })
            .collect();
        Ok(SimplexScheme { n, spaces, slots })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of spaces, `n(n+1)/2`.
    pub fn num_spaces(&self) -> usize {
        self.spaces.len()
    }

    pub fn spaces(&self) -> &[(usize, usize)] {
        &self.spaces
    }

    /// 1-based space positions of operator `k` (0-based operator index).
    pub fn slots(&self, k: usize) -> &[usize] {
        &self.slots[k]
    }

    pub fn all_slots(&self) -> &[Vec<usize>] {
        &self.slots
    }

    fn apply_at(&self, op: &PermOperator, slots: &[usize], state: u32) -> u32 {
        let total = self.num_spaces();
        let sub = extract_bits(state, total, slots);
        insert_bits(state, total, slots, op.image(sub))
    }

    /// Image of `state` under `R_1 R_2 ... R_{n+1}` (rightmost acts first).
    pub fn lhs_image(&self, op: &PermOperator, state: u32) -> u32 {
        self.slots.iter().rev().fold(state, |s, sl| self.apply_at(op, sl, s))
    }

    /// Image of `state` under `R_{n+1} ... R_2 R_1`.
    pub fn rhs_image(&self, op: &PermOperator, state: u32) -> u32 {
        self.slots.iter().fold(state, |s, sl| self.apply_at(op, sl, s))
    }
}

/// Exhaustive check of the constant n-simplex equation for a
/// permutation-type operator over all `2^N` basis states.
pub fn perm_simplex_check(scheme: &SimplexScheme, op: &PermOperator) -> Result<Report> {
    let started = Instant::now();
    if op.arity() != scheme.order() {
        return Err(Error::ArityMismatch { expected: scheme.order(), found: op.arity() });
    }
    let total = scheme.num_spaces();
    let mut witnesses = Vec::new();
    let mut violations = 0usize;
    for state in 0..1u32 << total {
        let l = scheme.lhs_image(op, state);
        let r = scheme.rhs_image(op, state);
        if l != r {
            violations += 1;
            if witnesses.len() < MAX_WITNESSES {
                witnesses.push(Witness {
                    row: MultiIndex::from_code(l, total).0,
                    col: MultiIndex::from_code(state, total).0,
                    poly: format!("rhs={}", MultiIndex::from_code(r, total)),
                });
            }
        }
    }
    let status = if violations == 0 { Status::Pass } else { Status::Fail };
    let mut report = Report::new(format!("{}-simplex", scheme.order()), status);
    report.points = Some(1 << total);
    report.witnesses = witnesses;
    report.details = Some(serde_json::json!({
        "states": 1u64 << total,
        "violations": violations,
        "slots": scheme.all_slots(),
    }));
    Ok(report.finish(started))
}

/// Named operators used throughout: the 2D swap `S2` and its flipped partner
/// `T2`, the 3D pair `S3`/`T3`, and the four-simplex map `H4`.
pub mod named {
    use super::AffineBitMap;

    fn build(a: &[&[u8]], b: &[u8]) -> AffineBitMap {
        let a: Vec<Vec<u8>> = a.iter().map(|r| r.to_vec()).collect();
        AffineBitMap::new(&a, b).expect("well-formed builtin")
    }

    pub fn s2() -> AffineBitMap {
        build(&[&[0, 1], &[1, 0]], &[0, 0])
    }

    pub fn t2() -> AffineBitMap {
        build(&[&[0, 1], &[1, 0]], &[1, 1])
    }

    pub fn s3() -> AffineBitMap {
        build(&[&[1, 1, 1], &[0, 0, 1], &[0, 1, 0]], &[0, 0, 0])
    }

    pub fn t3() -> AffineBitMap {
        build(&[&[1, 1, 1], &[0, 0, 1], &[0, 1, 0]], &[1, 1, 1])
    }

    pub fn h4() -> AffineBitMap {
        build(
            &[&[1, 1, 1, 1], &[0, 0, 1, 1], &[0, 1, 0, 1], &[0, 0, 0, 1]],
            &[0, 0, 0, 0],
        )
    }

    pub fn by_name(name: &str) -> Option<AffineBitMap> {
        match name.to_ascii_uppercase().as_str() {
            "S2" => Some(s2()),
            "T2" => Some(t2()),
            "S3" => Some(s3()),
            "T3" => Some(t3()),
            "H4" => Some(h4()),
            _ => None,
        }
    }

    pub const NAMES: [&str; 5] = ["S2", "T2", "S3", "T3", "H4"];
}

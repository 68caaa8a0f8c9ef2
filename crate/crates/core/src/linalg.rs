//! Exact rational linear algebra: row reduction with deterministic pivoting,
//! rank, row-space comparison, and a replayable log of elementary row
//! operations (the log is how integrability conditions are traced back to the
//! equations that produced them).
//!
//! Rows are stored sparsely (sorted by column) because prolonged systems are
//! wide and mostly zero; the interface speaks dense coordinates throughout.
//! Pivoting is "topmost non-zero in the leftmost eligible column", which makes
//! every reduction byte-reproducible — exact arithmetic has no stability
//! concerns that would justify anything fancier.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::system::JetCoordinate;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (invariants maintained by the underlying representation).
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse "p" or "p/q" (optional leading minus) into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| format!("bad numerator in rational '{s}'"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| format!("bad denominator in rational '{s}'"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in rational '{s}'"));
    }
    Ok(Rational::new(num, den))
}

/// Render as "p" for integers, "p/q" otherwise; the JSON wire format.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// One elementary row operation. `AddMul` means `row[dst] += factor · row[src]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowOp {
    Swap(usize, usize),
    Scale(usize, Rational),
    AddMul {
        dst: usize,
        src: usize,
        factor: Rational,
    },
}

/// Ordered list of row operations; replaying them on the original matrix
/// reproduces the reduced matrix exactly.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RowOps(pub Vec<RowOp>);

impl RowOps {
    /// Replay the recorded operations on `m`.
    pub fn apply(&self, m: &RationalMatrix) -> RationalMatrix {
        let mut data = m.data.clone();
        for op in &self.0 {
            match op {
                RowOp::Swap(i, j) => data.swap(*i, *j),
                RowOp::Scale(i, c) => {
                    assert!(!c.is_zero(), "scaling a row by zero is not elementary");
                    data[*i] = scale_row(&data[*i], c);
                }
                RowOp::AddMul { dst, src, factor } => {
                    data[*dst] = add_mul(&data[*dst], &data[*src], factor);
                }
            }
        }
        RationalMatrix { data, ..m.clone() }
    }
}

type Row = Vec<(u32, Rational)>;

fn scale_row(row: &Row, c: &Rational) -> Row {
    row.iter().map(|(j, v)| (*j, v * c)).collect()
}

/// dst + factor·src over sorted sparse rows, dropping cancellations.
fn add_mul(dst: &Row, src: &Row, factor: &Rational) -> Row {
    if factor.is_zero() {
        return dst.clone();
    }
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut a, mut b) = (0usize, 0usize);
    while a < dst.len() && b < src.len() {
        let (ca, cb) = (dst[a].0, src[b].0);
        if ca < cb {
            out.push(dst[a].clone());
            a += 1;
        } else if ca > cb {
            out.push((cb, factor * &src[b].1));
            b += 1;
        } else {
            let v = &dst[a].1 + factor * &src[b].1;
            if !v.is_zero() {
                out.push((ca, v));
            }
            a += 1;
            b += 1;
        }
    }
    out.extend_from_slice(&dst[a..]);
    for (c, v) in &src[b..] {
        out.push((*c, factor * v));
    }
    out
}

fn row_entry(row: &Row, col: u32) -> Option<&Rational> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|i| &row[i].1)
}

/// A rows×cols matrix of exact rationals, optionally with jet-coordinate
/// column labels (required by the row-space comparisons that realize
/// "same system?" questions).
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Row>,
    column_labels: Option<Vec<JetCoordinate>>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("incomparable systems: row spaces live over different column labelings")]
    IncomparableSystems,
}

/// Result of `rref`: the unique reduced row-echelon form, the operation log
/// that produces it, and the pivot columns in increasing order.
pub struct Rref {
    pub matrix: RationalMatrix,
    pub ops: RowOps,
    pub pivot_cols: Vec<usize>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
            column_labels: None,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j as u32, v.clone()))
                    .collect()
            })
            .collect();
        RationalMatrix {
            rows: rows.len(),
            cols,
            data,
            column_labels: None,
        }
    }

    /// Build from per-row `(column, value)` lists; entries may be unsorted but
    /// must not repeat a column within a row.
    pub fn from_sparse_rows(cols: usize, rows: Vec<Vec<(usize, Rational)>>) -> Self {
        let data = rows
            .into_iter()
            .map(|entries| {
                let mut row: Row = entries
                    .into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| {
                        assert!(c < cols, "column index {c} out of range for {cols} columns");
                        (c as u32, v)
                    })
                    .collect();
                row.sort_by_key(|(c, _)| *c);
                for w in row.windows(2) {
                    assert!(w[0].0 != w[1].0, "duplicate column {} in row", w[0].0);
                }
                row
            })
            .collect::<Vec<_>>();
        RationalMatrix {
            rows: data.len(),
            cols,
            data,
            column_labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<JetCoordinate>) -> Self {
        assert_eq!(
            labels.len(),
            self.cols,
            "label count must match column count"
        );
        self.column_labels = Some(labels);
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn labels(&self) -> Option<&[JetCoordinate]> {
        self.column_labels.as_deref()
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        assert!(i < self.rows && j < self.cols, "index out of range");
        row_entry(&self.data[i], j as u32)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Sparse view of row i: sorted (column, value) pairs, zeros omitted.
    pub fn row(&self, i: usize) -> &[(u32, Rational)] {
        &self.data[i]
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.data[i].is_empty()
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut rows: Vec<Row> = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                rows[*j as usize].push((i as u32, v.clone()));
            }
        }
        // Column order within each new row is already ascending because we
        // visited source rows in order.
        RationalMatrix {
            rows: self.cols,
            cols: self.rows,
            data: rows,
            column_labels: None,
        }
    }

    /// Reduced row-echelon form with the deterministic pivot rule: scan
    /// columns left to right, pick the topmost not-yet-used row with a
    /// non-zero entry in that column, normalize it to 1, and clear the column
    /// everywhere else. Zero rows end up at the bottom; pivot rows are ordered
    /// by pivot column.
    pub fn rref(&self) -> Rref {
        let mut data = self.data.clone();
        let mut ops = Vec::new();
        let mut pivot_cols = Vec::new();
        // Unused rows bucketed by leading column. Invariant: when column c is
        // processed, every unused row has leading column ≥ c, so the bucket at
        // c holds exactly the rows with a non-zero entry there.
        let mut buckets: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, row) in data.iter().enumerate() {
            if let Some((lead, _)) = row.first() {
                buckets.entry(*lead).or_default().push(i);
            }
        }
        let mut pivot_rows: Vec<(usize, u32)> = Vec::new(); // (row, pivot col)

        for col in 0..self.cols as u32 {
            let Some(mut cand) = buckets.remove(&col) else {
                continue;
            };
            cand.sort_unstable();
            let p = cand[0];
            let pv = data[p][0].1.clone();
            debug_assert_eq!(data[p][0].0, col);
            if !pv.is_one() {
                let inv = pv.recip();
                data[p] = scale_row(&data[p], &inv);
                ops.push(RowOp::Scale(p, inv));
            }
            // Clear the column in the remaining candidates (all lead here).
            for &j in &cand[1..] {
                let factor = -data[j][0].1.clone();
                data[j] = add_mul(&data[j], &data[p], &factor);
                ops.push(RowOp::AddMul {
                    dst: j,
                    src: p,
                    factor,
                });
                if let Some((lead, _)) = data[j].first() {
                    buckets.entry(*lead).or_default().push(j);
                }
            }
            // Back-substitute into rows that already carry a pivot.
            for &(pr, _) in &pivot_rows {
                if let Some(v) = row_entry(&data[pr], col) {
                    let factor = -v.clone();
                    data[pr] = add_mul(&data[pr], &data[p], &factor);
                    ops.push(RowOp::AddMul {
                        dst: pr,
                        src: p,
                        factor,
                    });
                }
            }
            pivot_rows.push((p, col));
            pivot_cols.push(col as usize);
        }

        // Sort pivot rows by pivot column, zero rows last, via recorded swaps.
        let mut desired: Vec<usize> = pivot_rows.iter().map(|&(r, _)| r).collect();
        let mut rest: Vec<usize> = (0..self.rows)
            .filter(|i| !pivot_rows.iter().any(|&(r, _)| r == *i))
            .collect();
        desired.append(&mut rest);
        // `desired[k]` = index (in the pre-sort layout) of the row that must
        // land at position k. Apply as a sequence of swaps.
        let mut position: Vec<usize> = (0..self.rows).collect(); // position[orig] = current slot
        let mut occupant: Vec<usize> = (0..self.rows).collect(); // occupant[slot] = orig row
        for (slot, &want) in desired.iter().enumerate() {
            let cur = position[want];
            if cur != slot {
                data.swap(slot, cur);
                ops.push(RowOp::Swap(slot, cur));
                let other = occupant[slot];
                occupant.swap(slot, cur);
                position[want] = slot;
                position[other] = cur;
            }
        }

        Rref {
            matrix: RationalMatrix {
                rows: self.rows,
                cols: self.cols,
                data,
                column_labels: self.column_labels.clone(),
            },
            ops: RowOps(ops),
            pivot_cols,
        }
    }

    /// Pivot columns via forward elimination only (same deterministic rule,
    /// same pivot set as `rref`, far less fill-in). This is the workhorse for
    /// rank and for the series oracle's principal/parametric classification.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.forward_eliminate().1
    }

    /// Forward elimination; returns the echelon pivot rows keyed by leading
    /// column, plus the pivot columns in increasing order.
    fn forward_eliminate(&self) -> (BTreeMap<u32, Row>, Vec<usize>) {
        let mut data = self.data.clone();
        let mut buckets: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, row) in data.iter().enumerate() {
            if let Some((lead, _)) = row.first() {
                buckets.entry(*lead).or_default().push(i);
            }
        }
        let mut pivots: BTreeMap<u32, Row> = BTreeMap::new();
        let mut pivot_cols = Vec::new();
        while let Some((&col, _)) = buckets.iter().next() {
            let mut cand = buckets.remove(&col).unwrap();
            cand.sort_unstable();
            let p = cand[0];
            let inv = data[p][0].1.clone().recip();
            let prow = scale_row(&data[p], &inv);
            for &j in &cand[1..] {
                let factor = -data[j][0].1.clone();
                data[j] = add_mul(&data[j], &prow, &factor);
                if let Some((lead, _)) = data[j].first() {
                    buckets.entry(*lead).or_default().push(j);
                }
            }
            data[p] = Vec::new();
            pivots.insert(col, prow);
            pivot_cols.push(col as usize);
        }
        (pivots, pivot_cols)
    }

    pub fn rank(&self) -> usize {
        self.pivot_columns().len()
    }

    /// True iff `row` (sparse, sorted or not) lies in the row space.
    pub fn row_space_contains(&self, row: &[(usize, Rational)]) -> bool {
        let (pivots, _) = self.forward_eliminate();
        let mut residual: Row = row
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| {
                assert!(*c < self.cols, "column index out of range");
                (*c as u32, v.clone())
            })
            .collect();
        residual.sort_by_key(|(c, _)| *c);
        while let Some((lead, v)) = residual.first().cloned() {
            let Some(prow) = pivots.get(&lead) else {
                return false;
            };
            let factor = -v;
            residual = add_mul(&residual, prow, &factor);
        }
        true
    }

    /// Exact row-space equality. Requires both matrices to carry the same
    /// column labeling (or both none with equal widths); anything else is an
    /// "incomparable systems" error, not `false`.
    pub fn row_space_equal(&self, other: &RationalMatrix) -> Result<bool, LinalgError> {
        if self.cols != other.cols || self.column_labels != other.column_labels {
            return Err(LinalgError::IncomparableSystems);
        }
        let a = self.rref();
        let b = other.rref();
        if a.pivot_cols != b.pivot_cols {
            return Ok(false);
        }
        let k = a.pivot_cols.len();
        Ok(a.matrix.data[..k] == b.matrix.data[..k])
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let dense: Vec<String> = (0..self.cols)
                .map(|j| format_rational(&self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", dense.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_solves_the_two_row_example() {
        let a = m(&[&[2, 0, -1], &[1, 1, 0]]);
        let r = a.rref();
        assert_eq!(r.pivot_cols, vec![0, 1]);
        let want = RationalMatrix::from_rows(vec![
            vec![rat(1), rat(0), ratio(-1, 2)],
            vec![rat(0), rat(1), ratio(1, 2)],
        ]);
        assert_eq!(r.matrix, want);
    }

    #[test]
    fn rref_zero_and_identity() {
        let z = RationalMatrix::zero(3, 4);
        let r = z.rref();
        assert!(r.pivot_cols.is_empty());
        assert_eq!(r.matrix, z);

        let id = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let r = id.rref();
        assert_eq!(r.pivot_cols, vec![0, 1, 2]);
        assert_eq!(r.matrix, id);
    }

    #[test]
    fn rref_moves_zero_rows_to_bottom_and_orders_pivots() {
        let a = m(&[&[0, 0, 0], &[0, 2, 4], &[1, 1, 1]]);
        let r = a.rref();
        assert_eq!(r.pivot_cols, vec![0, 1]);
        let want = m(&[&[1, 0, -1], &[0, 1, 2], &[0, 0, 0]]);
        assert_eq!(r.matrix, want);
    }

    #[test]
    fn rref_is_idempotent_and_replayable() {
        let samples = [
            m(&[&[2, 4, -2, 0], &[1, 2, 0, 3], &[3, 6, -2, 3], &[0, 0, 1, 1]]),
            m(&[&[0, 1], &[1, 0], &[1, 1]]),
            m(&[&[5]]),
        ];
        for a in samples {
            let r = a.rref();
            let again = r.matrix.rref();
            assert_eq!(again.matrix, r.matrix);
            assert!(
                again.ops.0.is_empty(),
                "rref of an rref needs no operations"
            );
            assert_eq!(r.ops.apply(&a), r.matrix);
        }
    }

    #[test]
    fn rank_properties() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.transpose().rank(), 2);
        let scaled = m(&[&[1, 2, 3], &[1, 2, 3], &[0, -7, -7]]);
        assert_eq!(scaled.rank(), 2);
        assert_eq!(RationalMatrix::zero(2, 2).rank(), 0);
    }

    #[test]
    fn pivot_columns_agree_with_rref() {
        let a = m(&[&[0, 2, 1, 3], &[0, 4, 2, 6], &[1, 0, 0, 1], &[1, 2, 1, 4]]);
        assert_eq!(a.pivot_columns(), a.rref().pivot_cols);
    }

    #[test]
    fn row_space_membership() {
        let a = m(&[&[1, 0, 1], &[0, 1, 1]]);
        assert!(a.row_space_contains(&[(0, rat(2)), (1, rat(3)), (2, rat(5))]));
        assert!(a.row_space_contains(&[]));
        assert!(!a.row_space_contains(&[(0, rat(1)), (1, rat(1)), (2, rat(1))]));
    }

    #[test]
    fn row_space_equality_without_labels() {
        let a = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let b = m(&[&[1, 1, 2], &[2, 1, 3], &[3, 2, 5]]);
        assert_eq!(a.row_space_equal(&b), Ok(true));
        let c = m(&[&[1, 0, 1], &[0, 1, 2]]);
        assert_eq!(a.row_space_equal(&c), Ok(false));
        let wide = m(&[&[1, 0, 1, 0]]);
        assert_eq!(
            a.row_space_equal(&wide),
            Err(LinalgError::IncomparableSystems)
        );
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rational(&rat(12)), "12");
        assert_eq!(format_rational(&ratio(-73, 3)), "-73/3");
        assert_eq!(parse_rational("9/2").unwrap(), ratio(9, 2));
        assert_eq!(parse_rational(" -5 ").unwrap(), rat(-5));
        assert_eq!(parse_rational("4/6").unwrap(), ratio(2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}

//! Row reduction over a `Scalar` field.

use crate::scalar::Scalar;

pub type Row = Vec<Scalar>;

/// Scale `row` so that its first nonzero entry is one. Zero rows are left alone.
pub fn normalize(row: &mut [Scalar]) {
    if let Some(lead) = row.iter().find(|c| !c.is_zero()).cloned() {
        if lead.is_one() {
            return;
        }
        let inv = lead.inv().expect("nonzero lead");
        for c in row.iter_mut() {
            *c = c.mul(&inv);
        }
    }
}

pub fn is_zero_row(row: &[Scalar]) -> bool {
    row.iter().all(Scalar::is_zero)
}

/// Reduced row echelon form with zero rows dropped. Returns the rows and
/// their pivot columns.
pub fn rref(mut rows: Vec<Row>) -> (Vec<Row>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        for c in rows[r].iter_mut() {
            *c = c.mul(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (c, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *c = c.sub(&f.mul(p));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: Vec<Row>) -> usize {
    rref(rows).0.len()
}

/// Reduce `v` against an RREF basis; the result is zero iff `v` lies in the
/// row space.
pub fn reduce(basis: &[Row], pivots: &[usize], v: &[Scalar]) -> Row {
    let mut out = v.to_vec();
    for (row, &col) in basis.iter().zip(pivots) {
        if out[col].is_zero() {
            continue;
        }
        let f = out[col].clone();
        for (c, b) in out.iter_mut().zip(row) {
            if !b.is_zero() {
                *c = c.sub(&f.mul(b));
            }
        }
    }
    out
}

pub fn in_row_space(basis: &[Row], pivots: &[usize], v: &[Scalar]) -> bool {
    is_zero_row(&reduce(basis, pivots, v))
}

/// Coordinates on the solution space of an RREF system: each normal `b` is
/// rewritten as a form in the free (non-pivot) variables by substituting
/// `x_p = -sum_f R[p][f] x_f` for every pivot variable.
pub fn restrict_form(basis: &[Row], pivots: &[usize], b: &[Scalar]) -> Row {
    let reduced = reduce(basis, pivots, b);
    (0..b.len())
        .filter(|c| !pivots.contains(c))
        .map(|c| reduced[c].clone())
        .collect()
}

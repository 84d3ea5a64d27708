//! Gaussian elimination over a finite field.

use super::field::FieldElement;

/// Returns some `x` with `rows * x = rhs`, free variables set to zero, or
/// `None` when the system is inconsistent.
pub fn solve(
    mut rows: Vec<Vec<FieldElement>>,
    mut rhs: Vec<FieldElement>,
) -> Option<Vec<FieldElement>> {
    let n_rows = rows.len();
    let zero = rhs.first()?.field().zero();
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n_cols {
        let Some(piv) = (r..n_rows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        rhs.swap(r, piv);
        let inv = rows[r][c].inv().ok()?;
        for v in rows[r].iter_mut() {
            *v = *v * inv;
        }
        rhs[r] = rhs[r] * inv;
        for i in 0..n_rows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c];
                for k in 0..n_cols {
                    let t = rows[r][k];
                    rows[i][k] = rows[i][k] - f * t;
                }
                rhs[i] = rhs[i] - f * rhs[r];
            }
        }
        pivots.push(c);
        r += 1;
        if r == n_rows {
            break;
        }
    }
    if rhs[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![zero; n_cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rhs[i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    #[test]
    fn solves_and_detects_inconsistency() {
        let f = Field::new(7, 1).unwrap();
        let e = |n| f.from_int(n);
        let rows = vec![vec![e(1), e(2)], vec![e(3), e(4)]];
        let x = solve(rows.clone(), vec![e(5), e(6)]).unwrap();
        assert_eq!(e(1) * x[0] + e(2) * x[1], e(5));
        assert_eq!(e(3) * x[0] + e(4) * x[1], e(6));
        let singular = vec![vec![e(1), e(2)], vec![e(2), e(4)]];
        assert!(solve(singular, vec![e(1), e(1)]).is_none());
    }
}

//! Smith normal form over `Z/p^D` by minimal-valuation pivoting.

use super::extsig::{ExtendedSignature, SnPart};
use super::ring::ResidueRing;

/// Singular numbers of a `rows × cols` row-major matrix. Pivots on the
/// entry of least valuation (ties: smallest row, then column), clears its
/// row and column with unit multiples, and recurses on the remaining block.
pub(crate) fn smith_generic<R: ResidueRing>(ring: &R, rows: usize, cols: usize, mut a: Vec<R::E>) -> ExtendedSignature {
    let len = rows.min(cols);
    let d = ring.precision();
    let mut found = Vec::with_capacity(len);
    for s in 0..len {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in s..rows {
            for j in s..cols {
                let v = ring.valuation(&a[i * cols + j]);
                if v < d && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        if pi != s {
            for j in 0..cols {
                a.swap(pi * cols + j, s * cols + j);
            }
        }
        if pj != s {
            for i in 0..rows {
                a.swap(i * cols + pj, i * cols + s);
            }
        }
        let unit = ring.div_p_pow(&a[s * cols + s], v);
        let inv = ring.inv_unit(&unit);
        for i in s + 1..rows {
            let e = &a[i * cols + s];
            if ring.is_zero(e) {
                continue;
            }
            let f = ring.mul(&ring.div_p_pow(e, v), &inv);
            for j in s..cols {
                let sub = ring.mul(&f, &a[s * cols + j]);
                a[i * cols + j] = ring.sub(&a[i * cols + j], &sub);
            }
        }
        // After the row pass only row s has entries in the pivot column, so
        // the column pass only alters row s.
        for j in s + 1..cols {
            a[s * cols + j] = ring.zero();
        }
        found.push(v as i64);
    }
    let mut parts: Vec<SnPart> = vec![SnPart::AtLeastPrecision; len - found.len()];
    parts.extend(found.into_iter().rev().map(SnPart::Exact));
    ExtendedSignature::new(d, parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::ring::SmallRing;

    #[test]
    fn rectangular() {
        let r = SmallRing::new(2, 6).unwrap();
        // [[2, 4, 6]] has a single part 1.
        let e = smith_generic(&r, 1, 3, vec![2, 4, 6]);
        assert_eq!(e.parts(), &[SnPart::Exact(1)]);
        let e = smith_generic(&r, 3, 2, vec![4, 0, 0, 8, 0, 0]);
        assert_eq!(e.parts(), &[SnPart::Exact(3), SnPart::Exact(2)]);
    }

    #[test]
    fn non_diagonal() {
        let r = SmallRing::new(3, 5).unwrap();
        // det = 3*5 - 6*1 = 9, gcd of entries = 1: parts (2, 0).
        let e = smith_generic(&r, 2, 2, vec![3, 6, 1, 5]);
        assert_eq!(e.parts(), &[SnPart::Exact(2), SnPart::Exact(0)]);
    }
}

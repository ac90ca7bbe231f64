//! Integer lattices: Hermite bases, Smith normal form and quotient exponents.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::Rational;

/// Row-style Hermite reduction of the integer span of `rows`; returns a
/// ℤ-basis (nonzero rows, echelon form with positive pivots).
pub fn lattice_basis(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        loop {
            // smallest nonzero |entry| in column c at or below r
            let Some(p) = (r..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&i, &j| m[i][c].abs().cmp(&m[j][c].abs()))
            else {
                break;
            };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                for j in c..cols {
                    let d = &q * &m[r][j];
                    m[i][j] -= d;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m
}

/// Nonzero diagonal entries `d1 | d2 | ...` of the Smith normal form.
pub fn elementary_divisors(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut divisors = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !m[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return divisors;
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t].div_floor(&m[t][t]);
                if !q.is_zero() {
                    for j in t..cols {
                        let d = &q * &m[t][j];
                        m[i][j] -= d;
                    }
                }
                clean &= m[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = m[t][j].div_floor(&m[t][t]);
                if !q.is_zero() {
                    for i in t..rows {
                        let d = &q * &m[i][t];
                        m[i][j] -= d;
                    }
                }
                clean &= m[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let offending = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&m[i][j] % &m[t][t]).is_zero()));
            match offending {
                Some(i) => {
                    for j in t..cols {
                        let v = m[i][j].clone();
                        m[t][j] += v;
                    }
                }
                None => break,
            }
        }
        divisors.push(m[t][t].abs());
    }
    divisors
}

/// Exponent of `span(ambient) / span(sub)`: the least `m > 0` with
/// `m · span(ambient) ⊆ span(sub)`.
pub fn quotient_exponent(ambient: &[Vec<BigInt>], sub: &[Vec<BigInt>]) -> Result<BigInt> {
    let dim = ambient
        .first()
        .or(sub.first())
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidInput("empty generator lists".into()))?;
    if ambient.iter().chain(sub).any(|v| v.len() != dim) {
        return Err(Error::InvalidInput("generators of unequal length".into()));
    }
    let basis = lattice_basis(ambient);
    if basis.len() < dim {
        return Err(Error::Precondition(format!(
            "ambient lattice has rank {} < {dim}",
            basis.len()
        )));
    }
    let basis_q: linalg::Matrix = basis
        .iter()
        .map(|r| r.iter().cloned().map(Rational::from_integer).collect())
        .collect();
    // sub = X · basis  ⇒  X = sub · basis⁻¹
    let inv = linalg::inverse(&basis_q)
        .ok_or_else(|| Error::invariant("hermite basis is singular"))?;
    let mut coords = Vec::with_capacity(sub.len());
    for (k, s) in sub.iter().enumerate() {
        let row: Vec<Rational> = s.iter().cloned().map(Rational::from_integer).collect();
        let x = linalg::mat_vec(&linalg::transpose(&inv), &row);
        if !x.iter().all(Rational::is_integer) {
            return Err(Error::Precondition(format!(
                "sub generator {k} not contained in ambient lattice"
            )));
        }
        coords.push(x.into_iter().map(|q| q.to_integer()).collect::<Vec<_>>());
    }
    let divisors = elementary_divisors(&coords);
    if divisors.len() < dim {
        return Err(Error::Precondition(format!(
            "sub lattice has rank {} < {dim}",
            divisors.len()
        )));
    }
    Ok(divisors.last().cloned().unwrap_or_else(BigInt::one))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn b(values: &[i64]) -> Vec<BigInt> {
        values.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_of_small_matrices() {
        assert_eq!(elementary_divisors(&m(&[&[2, 0], &[0, 2]])), b(&[2, 2]));
        assert_eq!(elementary_divisors(&m(&[&[2, 0], &[0, 3]])), b(&[1, 6]));
        assert_eq!(
            elementary_divisors(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])),
            b(&[2, 6, 12])
        );
        assert_eq!(elementary_divisors(&m(&[&[0, 0], &[0, 0]])), b(&[]));
        assert_eq!(elementary_divisors(&m(&[&[1, 2], &[2, 4]])), b(&[1]));
    }

    #[test]
    fn hermite_basis_of_redundant_generators() {
        let basis = lattice_basis(&m(&[&[2, 0], &[0, 2], &[1, 1]]));
        assert_eq!(basis.len(), 2);
        let det: BigInt = &basis[0][0] * &basis[1][1] - &basis[0][1] * &basis[1][0];
        assert_eq!(det.abs(), BigInt::from(2));
    }

    #[test]
    fn quotient_exponents() {
        let z2 = m(&[&[1, 0], &[0, 1]]);
        assert_eq!(quotient_exponent(&z2, &m(&[&[2, 0], &[0, 2]])).unwrap(), BigInt::from(2));
        assert_eq!(quotient_exponent(&z2, &z2).unwrap(), BigInt::from(1));
        assert_eq!(quotient_exponent(&z2, &m(&[&[1, 0], &[0, 3]])).unwrap(), BigInt::from(3));
        // ℤ²/⟨(2,0),(0,3)⟩ ≅ ℤ/6: exponent 6, index 6
        assert_eq!(quotient_exponent(&z2, &m(&[&[2, 0], &[0, 3]])).unwrap(), BigInt::from(6));
    }

    #[test]
    fn quotient_exponent_errors() {
        let amb = m(&[&[2, 0], &[0, 2]]);
        assert!(quotient_exponent(&amb, &m(&[&[1, 0], &[0, 2]])).is_err());
        let z2 = m(&[&[1, 0], &[0, 1]]);
        assert!(quotient_exponent(&z2, &m(&[&[1, 1], &[2, 2]])).is_err());
        assert!(quotient_exponent(&m(&[&[1, 0]]), &z2).is_err());
    }
}

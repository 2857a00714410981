//! Dense square matrices and the scaled-integer fast path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::weight::Weight;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<C> {
    n: usize,
    data: Vec<C>,
}

impl<C: Clone> Matrix<C> {
    pub fn filled(n: usize, value: C) -> Self {
        Matrix { n, data: vec![value; n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                data.push(f(u, v));
            }
        }
        Matrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> &C {
        &self.data[u * self.n + v]
    }

    pub fn set(&mut self, u: usize, v: usize, value: C) {
        self.data[u * self.n + v] = value;
    }

    /// Sets both `(u, v)` and `(v, u)`.
    pub fn set_sym(&mut self, u: usize, v: usize, value: C) {
        self.data[u * self.n + v] = value.clone();
        self.data[v * self.n + u] = value;
    }

    pub fn row(&self, u: usize) -> &[C] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn map<D: Clone>(&self, f: impl Fn(&C) -> D) -> Matrix<D> {
        Matrix { n: self.n, data: self.data.iter().map(f).collect() }
    }

    /// Principal submatrix on `nodes` (in the given order).
    pub fn submatrix(&self, nodes: &[usize]) -> Matrix<C> {
        Matrix::from_fn(nodes.len(), |i, j| self.get(nodes[i], nodes[j]).clone())
    }
}

/// Largest magnitude accepted for a scaled entry; leaves ample headroom for
/// sums over any desk-scale structure inside an `i128`.
const SCALED_LIMIT_BITS: u64 = 80;

/// Integer image of a rational matrix: `weights[u][v] = ints[u][v] / denom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledMatrix {
    pub denom: BigInt,
    pub ints: Matrix<i128>,
}

impl ScaledMatrix {
    /// Returns `None` when the common-denominator image does not fit the
    /// fast path; callers then fall back to exact rationals.
    pub fn try_new(m: &Matrix<Weight>) -> Option<Self> {
        let denom = common_denominator(m.data.iter());
        if denom.bits() > SCALED_LIMIT_BITS {
            return None;
        }
        let mut data = Vec::with_capacity(m.data.len());
        for w in &m.data {
            let scaled = w.numer() * (&denom / w.denom());
            if scaled.bits() > SCALED_LIMIT_BITS {
                return None;
            }
            data.push(scaled.to_i128()?);
        }
        Some(ScaledMatrix { denom, ints: Matrix { n: m.n, data } })
    }

    pub fn unscale(&self, v: i128) -> Weight {
        Weight::from_rational(BigRational::new(BigInt::from(v), self.denom.clone()))
            .expect("scaled costs are non-negative")
    }
}

pub fn common_denominator<'a>(ws: impl Iterator<Item = &'a Weight>) -> BigInt {
    ws.fold(BigInt::one(), |acc, w| acc.lcm(w.denom()))
}

/// Scales a list of rationals to integers over a common denominator, if the
/// result fits the fast path.
pub fn scale_all(ws: &[Weight]) -> Option<(BigInt, Vec<i128>)> {
    let denom = common_denominator(ws.iter());
    if denom.bits() > SCALED_LIMIT_BITS {
        return None;
    }
    let mut out = Vec::with_capacity(ws.len());
    for w in ws {
        let s = w.numer() * (&denom / w.denom());
        if s.is_negative() || s.bits() > SCALED_LIMIT_BITS {
            return None;
        }
        out.push(s.to_i128()?);
    }
    Some((denom, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_matrix_matches_rationals() {
        let m = Matrix::from_fn(3, |u, v| if u == v { Weight::zero() } else { Weight::ratio((u + v) as u64, 4) });
        let s = ScaledMatrix::try_new(&m).unwrap();
        assert_eq!(s.denom, BigInt::from(4));
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(&s.unscale(*s.ints.get(u, v)), m.get(u, v));
            }
        }
    }

    #[test]
    fn huge_denominators_fall_back() {
        let big = BigInt::from(2).pow(100);
        let w = Weight::try_ratio(BigInt::from(1), big).unwrap();
        let m = Matrix::from_fn(2, |u, v| if u == v { Weight::zero() } else { w.clone() });
        assert!(ScaledMatrix::try_new(&m).is_none());
    }
}

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{Rational, Scalar, ToF64};

/// Monomial as sorted `(variable, exponent)` pairs; the empty monomial is 1.
pub type Monomial = Vec<(u8, u8)>;

/// Multivariate polynomial with exact rational coefficients in ambient
/// coordinates `x_0, x_1, …`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl Poly {
    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::default();
        p.add_term(Vec::new(), c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(i: usize) -> Self {
        let mut p = Poly::default();
        p.add_term(vec![(i as u8, 1)], Rational::one());
        p
    }

    /// `⟨a, x⟩`.
    pub fn linear(a: &[Rational]) -> Self {
        let mut p = Poly::default();
        for (i, c) in a.iter().enumerate() {
            p.add_term(vec![(i as u8, 1)], c.clone());
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&(_, e)| e as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Poly::default();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// `∂/∂x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let var = i as u8;
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            if let Some(pos) = m.iter().position(|&(v, _)| v == var) {
                let e = m[pos].1;
                let mut dm = m.clone();
                if e == 1 {
                    dm.remove(pos);
                } else {
                    dm[pos].1 = e - 1;
                }
                out.add_term(dm, c * Rational::from_i64(e as i64));
            }
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter().fold(c.to_f64(), |acc, &(v, e)| {
                    acc * x[v as usize].powi(e as i32)
                })
            })
            .sum()
    }

    /// Exact value at a rational point.
    pub fn eval_exact(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m {
                for _ in 0..e {
                    t *= &x[v as usize];
                }
            }
            acc += t;
        }
        acc
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for v in self.terms.values_mut() {
            *v = -v.clone();
        }
        self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(mono_mul(ma, mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Poly { terms: acc }
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(Rational::one())
    }
}

impl Scalar for Poly {
    fn from_i64(v: i64) -> Self {
        Poly::constant(Rational::from_i64(v))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for &(v, e) in m {
                if e == 1 {
                    write!(f, "*x{v}")?;
                } else {
                    write!(f, "*x{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn arithmetic_and_derivatives() {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let p = x.clone() * x.clone() * y.clone() + Poly::from_i64(3) - y.clone();
        assert_eq!(p.degree(), 3);
        assert_eq!(p.derivative(0), Poly::from_i64(2) * x.clone() * y.clone());
        assert_eq!(p.derivative(1), x.clone() * x.clone() - Poly::one());
        assert_eq!(p.derivative(2), Poly::zero());
        assert!((p.eval(&[2.0, -1.0]) - (-4.0 + 3.0 + 1.0)).abs() < 1e-15);
        assert_eq!(p.eval_exact(&[rat(1, 2), rat(2, 1)]), rat(3, 2));
    }

    #[test]
    fn cancellation_leaves_zero() {
        let x = Poly::var(3);
        assert!((x.clone() - x).is_zero());
        let lin = Poly::linear(&[rat(1, 1), rat(0, 1), rat(-2, 1)]);
        assert_eq!(lin.terms().count(), 2);
    }
}

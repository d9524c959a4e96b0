use alloc::vec::Vec;

/// Multivariate polynomial as a list of `(coefficient, exponents)` terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(f64, Vec<u32>)>,
}

impl Polynomial {
    pub fn new(nvars: usize, terms: Vec<(f64, Vec<u32>)>) -> Self {
        assert!(
            terms.iter().all(|(_, e)| e.len() == nvars),
            "every monomial needs one exponent per variable"
        );
        Self { nvars, terms }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        Self::new(nvars, alloc::vec![(c, alloc::vec![0; nvars])])
    }

    /// The coordinate function `t_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = alloc::vec![0; nvars];
        e[i] = 1;
        Self::new(nvars, alloc::vec![(1.0, e)])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(f64, Vec<u32>)] {
        &self.terms
    }

    pub fn eval(&self, t: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| {
                e.iter()
                    .zip(t)
                    .fold(*c, |acc, (&k, &x)| acc * (0..k).fold(1.0, |p, _| p * x))
            })
            .sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, ea) in &self.terms {
            for (b, eb) in &other.terms {
                terms.push((a * b, ea.iter().zip(eb).map(|(x, y)| x + y).collect()));
            }
        }
        Self::new(self.nvars, terms)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(
            self.nvars,
            self.terms.iter().map(|(c, e)| (c * k, e.clone())).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::new(self.nvars, terms)
    }
}

/// `num / den`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rational {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl Rational {
    pub fn new(num: Polynomial, den: Polynomial) -> Self {
        assert_eq!(num.nvars(), den.nvars());
        Self { num, den }
    }

    pub fn polynomial(p: Polynomial) -> Self {
        let one = Polynomial::constant(p.nvars(), 1.0);
        Self::new(p, one)
    }

    /// `(numerator, denominator)` at `t`.
    pub fn eval_parts(&self, t: &[f64]) -> (f64, f64) {
        (self.num.eval(t), self.den.eval(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn arithmetic() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = x.add(&y).mul(&x.add(&y.scale(-1.0))); // x² - y²
        assert_eq!(p.eval(&[3.0, 2.0]), 5.0);
        assert_eq!(Polynomial::constant(2, 4.0).eval(&[9.0, 9.0]), 4.0);
        let r = Rational::new(p, Polynomial::new(2, vec![(2.0, vec![0, 0])]));
        assert_eq!(r.eval_parts(&[3.0, 2.0]), (5.0, 2.0));
    }
}

//! Truncated Taylor series ("jets") for exact-to-rounding higher derivatives of
//! univariate compositions. Coefficient `k` holds `f^{(k)}(x0)/k!`.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct Jet(Vec<f64>);

impl Jet {
    pub fn constant(c: f64, degree: usize) -> Jet {
        let mut v = vec![0.0; degree + 1];
        v[0] = c;
        Jet(v)
    }

    /// The identity function expanded at `x0`.
    pub fn variable(x0: f64, degree: usize) -> Jet {
        let mut v = vec![0.0; degree + 1];
        v[0] = x0;
        if degree > 0 {
            v[1] = 1.0;
        }
        Jet(v)
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// `f^{(k)}(x0)` for `k = 0..=degree`.
    pub fn derivatives(&self) -> Vec<f64> {
        let mut fact = 1.0;
        self.0
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    fact *= k as f64;
                }
                c * fact
            })
            .collect()
    }

    pub fn scale(&self, c: f64) -> Jet {
        Jet(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add_const(&self, c: f64) -> Jet {
        let mut v = self.0.clone();
        v[0] += c;
        Jet(v)
    }

    pub fn recip(&self) -> Jet {
        Jet::constant(1.0, self.degree()).div(self)
    }

    pub fn div(&self, g: &Jet) -> Jet {
        let n = self.0.len();
        let mut h = vec![0.0; n];
        for k in 0..n {
            let mut acc = self.0[k];
            for j in 1..=k {
                acc -= g.0[j] * h[k - j];
            }
            h[k] = acc / g.0[0];
        }
        Jet(h)
    }

    pub fn exp(&self) -> Jet {
        let n = self.0.len();
        let mut h = vec![0.0; n];
        h[0] = self.0[0].exp();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.0[j] * h[k - j];
            }
            h[k] = acc / k as f64;
        }
        Jet(h)
    }

    pub fn ln(&self) -> Jet {
        let n = self.0.len();
        let f0 = self.0[0];
        let mut h = vec![0.0; n];
        h[0] = f0.ln();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..k {
                acc += j as f64 * h[j] * self.0[k - j];
            }
            h[k] = (self.0[k] - acc / k as f64) / f0;
        }
        Jet(h)
    }

    /// `f^a` for `f(x0) > 0`.
    pub fn powf(&self, a: f64) -> Jet {
        let n = self.0.len();
        let f0 = self.0[0];
        let mut h = vec![0.0; n];
        h[0] = f0.powf(a);
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += ((a + 1.0) * j as f64 - k as f64) * self.0[j] * h[k - j];
            }
            h[k] = acc / (k as f64 * f0);
        }
        Jet(h)
    }

    pub fn sqrt(&self) -> Jet {
        self.powf(0.5)
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        Jet(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        Jet(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let n = self.0.len();
        let mut h = vec![0.0; n];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0[..n - i].iter().enumerate() {
                h[i + j] += a * b;
            }
        }
        Jet(h)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

//! Partition-free representations of Plancherel averages as binomial
//! convolutions `Σ_r c_r C(n, r)`.

mod constants;
mod identities;
mod zsum;

use rug::{Integer, Rational};

use crate::exact::{binomial, factorial};

pub use constants::{
    constant_h, constant_h_half, constant_h_with_terms, constant_hprime0, cross_identity_h,
    remark_constant, ConstantReport,
};
pub use identities::{verify_identity, CaseResult, Identity, IdentityReport};
pub use zsum::{aep_term, default_z_precision, g_eval, log_table, z_sum};

/// `p(x, r) = Π_{i=1}^r (x² − i²)`.
pub fn p_poly(x: i64, r: u32) -> Integer {
    let x2 = Integer::from(x) * x;
    (1..=r as i64).fold(Integer::from(1), |acc, i| acc * Integer::from(&x2 - i * i))
}

/// `q(x, r) = Π_{i=0}^{r-1} (x² − i²)`.
pub fn q_poly(x: i64, r: u32) -> Integer {
    let x2 = Integer::from(x) * x;
    (0..r as i64).fold(Integer::from(1), |acc, i| acc * Integer::from(&x2 - i * i))
}

/// `K_r = (2r)! (2r+1)! / ((r+1)!² r!)`; an integer for every `r`.
pub fn kr_constant(r: u32) -> Rational {
    let num = factorial(2 * r) * factorial(2 * r + 1);
    let den = Integer::from(factorial(r + 1).square_ref()) * factorial(r);
    Rational::from((num, den))
}

/// `u_n = Σ_{r=1}^n C(2r−2, r−1)² (−1)^r / ((2r² − 3r) r!) · C(n, r)`, so that
/// `E(X_n + Y_n) = u_n − n`.
pub fn u_sum(n: u32) -> Rational {
    let mut total = Rational::new();
    for r in 1..=n {
        let c = binomial(2 * r - 2, r - 1);
        let den = Integer::from(2 * r as i64 * r as i64 - 3 * r as i64) * factorial(r);
        let mut term = Rational::from((c.square() * binomial(n, r), den));
        if r % 2 == 1 {
            term = -term;
        }
        total += term;
    }
    total
}

/// `E(X_n + Y_n)` through `u_n − n`.
pub fn exy_sum(n: u32) -> Rational {
    u_sum(n) - n
}

/// `d_n = E D_n = Σ_{r≥1} (−1)^{r+1} (2r−2)! / ((r−1)!² r!) · C(n, r)`.
pub fn d_sum(n: u32) -> Rational {
    omega_sum(0, n)
}

/// `ω_{a,n} = E Φ_λ(a) = Σ_{r>a} (−1)^{r+a+1} (2r−2)! / ((r−1+a)! (r−1−a)! r!) · C(n, r)`.
pub fn omega_sum(a: u32, n: u32) -> Rational {
    let mut total = Rational::new();
    for r in a + 1..=n {
        let num = factorial(2 * r - 2) * binomial(n, r);
        let den = factorial(r - 1 + a) * factorial(r - 1 - a) * factorial(r);
        let term = Rational::from((num, den));
        if (r + a) % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_and_q_examples() {
        assert_eq!(p_poly(17, 0), 1);
        assert_eq!(p_poly(3, 2), 40);
        assert_eq!(p_poly(2, 3), 0);
        assert_eq!(p_poly(-2, 2), 0);
        assert_eq!(q_poly(5, 0), 1);
        assert_eq!(q_poly(3, 2), 72);
        assert_eq!(q_poly(1, 2), 0);
        for x in -6..=6 {
            for r in 1..5 {
                assert_eq!(q_poly(x, r), p_poly(x, r - 1) * x * x);
            }
        }
    }

    #[test]
    fn k_values() {
        assert_eq!(kr_constant(1), 3);
        assert_eq!(kr_constant(2), 40);
        assert_eq!(kr_constant(3), 1050);
        for r in 1..30 {
            assert_eq!(*kr_constant(r).denom(), 1);
        }
    }

    #[test]
    fn u_seeds() {
        let expect = [(0, 1), (1, 1), (3, 1), (16, 3), (49, 6)];
        for (n, &(p, q)) in expect.iter().enumerate() {
            assert_eq!(u_sum(n as u32), Rational::from((p, q)), "u_{n}");
        }
    }

    #[test]
    fn durfee_list() {
        assert_eq!(d_sum(0), 0);
        for n in 1..=3 {
            assert_eq!(d_sum(n), 1);
        }
        assert_eq!(d_sum(10), Rational::from((364859, 181440)));
    }

    #[test]
    fn omega_boundary_values() {
        for a in 0..8u32 {
            for n in 0..=a {
                assert_eq!(omega_sum(a, n), 0);
            }
            assert_eq!(omega_sum(a, a + 1), Rational::from((1, factorial(a + 1))));
        }
    }
}

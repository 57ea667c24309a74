//! Brute-force oracle: the Heine multivariate-integral representations of the
//! Hankel determinants and orthogonal polynomials, evaluated by tensor-product
//! Gauss-Legendre quadrature.
//!
//! This path shares no machinery with the determinant pipeline (no moments,
//! no LU), which is what makes it a meaningful cross-check at small n.

use crate::error::{Error, Result};
use crate::numerics::{Complex, PrecisionPolicy};
use rug::ops::CompleteRound;
use rug::Float;

/// Total tensor-node budget for the n-fold sums.
pub const NODE_BUDGET: u64 = 10_000_000;

/// A Gauss-Legendre rule on (-1,1) at working precision.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut prev = Float::with_val(prec, 1);
    if n == 0 {
        return (prev, Float::new(prec));
    }
    let mut curr = x.clone();
    for k in 1..n {
        // (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
        let a = (x * &curr).complete(prec) * ((2 * k + 1) as u32);
        let b = prev.clone() * (k as u32);
        let next = (a - b) / ((k + 1) as u32);
        prev = curr;
        curr = next;
    }
    // P_n' = n (x P_n - P_{n-1}) / (x^2 - 1)
    let num = ((x * &curr).complete(prec) - &prev) * (n as u32);
    let den = x.clone().square() - 1u32;
    (curr, num / den)
}

/// Gauss-Legendre nodes and weights: Newton refinement of Chebyshev initial
/// guesses at working precision. Nodes come out sorted ascending and exactly
/// antisymmetric.
pub fn gauss_legendre(order: usize, prec: u32) -> Result<QuadratureRule> {
    assert!(order >= 1);
    let work = prec + 32;
    let pi = crate::numerics::pi(work);
    let half = order / 2;
    let mut nodes = vec![Float::new(prec); order];
    let mut weights = vec![Float::new(prec); order];

    for i in 0..order.div_ceil(2) {
        // Chebyshev-style guess for the i-th positive-side root (descending)
        let mut x = (pi.clone() * Float::with_val(work, (i as f64) + 0.75)
            / Float::with_val(work, order as f64 + 0.5))
        .cos();
        let mut converged = false;
        let target = Float::with_val(64, -(work as i64) + 8).exp2();
        for _ in 0..200 {
            let (p, dp) = legendre_with_derivative(order, &x);
            if dp.is_zero() {
                break;
            }
            let step = p / dp;
            x -= &step;
            if step.abs() < target {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                what: "Gauss-Legendre Newton iteration",
                iterations: 200,
            });
        }
        let (_, dp) = legendre_with_derivative(order, &x);
        let w = Float::with_val(work, 2)
            / ((Float::with_val(work, 1) - x.clone().square()) * dp.square());
        // mirror: store the pair (-x, x) with the same weight
        let hi = order - 1 - i;
        nodes[hi] = Float::with_val(prec, &x);
        nodes[i] = Float::with_val(prec, -x);
        weights[hi] = Float::with_val(prec, &w);
        weights[i] = Float::with_val(prec, w);
    }
    if order % 2 == 1 {
        // centre node is exactly zero
        nodes[half] = Float::new(prec);
        let (_, dp) = legendre_with_derivative(order, &Float::new(work));
        weights[half] = Float::with_val(prec, Float::with_val(work, 2) / dp.square());
    }
    Ok(QuadratureRule { nodes, weights })
}

/// The symmetric n-fold integral I_n[f] = (1/n!) int f prod (x_l-x_k)^2
/// e^{i omega sum x} dx, with `extra(indices)` supplying f at each tensor
/// node (f = 1 when absent).
fn tensor_heine<F>(
    n: usize,
    omega: &Float,
    order: usize,
    policy: &PrecisionPolicy,
    extra: Option<&F>,
) -> Result<Complex>
where
    F: Fn(&[usize]) -> Complex,
{
    assert!((1..=4).contains(&n), "oracle supports n <= 4");
    let nodes_total = (order as u64).saturating_pow(n as u32);
    if nodes_total > NODE_BUDGET {
        return Err(Error::CostCapExceeded {
            nodes: nodes_total,
            budget: NODE_BUDGET,
        });
    }
    let prec = policy.bits;
    let rule = gauss_legendre(order, prec)?;
    // per-node oscillatory factors e^{i omega x_j}
    let phases: Vec<Complex> = rule
        .nodes
        .iter()
        .map(|x| Complex::new(Float::new(prec), (omega * x).complete(prec)).exp())
        .collect();

    // depth-first accumulation in sorted index order for determinism
    let mut acc = Complex::zero(prec);
    let mut idx = vec![0usize; n];
    let mut stack_wv: Vec<Float> = vec![Float::with_val(prec, 1); n + 1];
    let mut stack_e: Vec<Complex> = vec![Complex::one(prec); n + 1];
    let mut depth = 0usize;
    loop {
        if depth == n {
            let mut term = stack_e[n].scale(&stack_wv[n]);
            if let Some(f) = extra {
                term = term.mul(&f(&idx));
            }
            acc = acc.add(&term);
            // backtrack
            loop {
                if depth == 0 {
                    let fact = (1..=n as u64).product::<u64>();
                    return Ok(acc.scale(&Float::with_val(prec, fact).recip()));
                }
                depth -= 1;
                idx[depth] += 1;
                if idx[depth] < order {
                    break;
                }
                idx[depth] = 0;
            }
            continue;
        }
        // extend prefix with node idx[depth]
        let j = idx[depth];
        let mut wv = (&stack_wv[depth] * &rule.weights[j]).complete(prec);
        for prev in idx.iter().take(depth) {
            let diff = (&rule.nodes[j] - &rule.nodes[*prev]).complete(prec);
            wv *= diff.square();
        }
        stack_wv[depth + 1] = wv;
        stack_e[depth + 1] = stack_e[depth].mul(&phases[j]);
        depth += 1;
    }
}

/// h_{n-1} as the n-fold Heine integral.
pub fn heine_hankel(
    n: usize,
    omega: &Float,
    order: usize,
    policy: &PrecisionPolicy,
) -> Result<Complex> {
    tensor_heine::<fn(&[usize]) -> Complex>(n, omega, order, policy, None)
}

/// p_n(x) by Heine's formula: the n-fold integral with the extra factor
/// prod_m (x - x_m), divided by n! h_{n-1} with h_{n-1} taken from the same
/// quadrature oracle.
pub fn heine_poly(
    n: usize,
    omega: &Float,
    x: &Complex,
    order: usize,
    policy: &PrecisionPolicy,
) -> Result<Complex> {
    let den = heine_hankel(n, omega, order, policy)?;
    let env = crate::hankel::envelope(n as i64 - 1, omega);
    let threshold = env * Float::with_val(policy.bits, 1e-15);
    if den.abs() < threshold {
        return Err(Error::NearSingular {
            index: n as i64 - 1,
            magnitude: den.abs().to_f64(),
            threshold: threshold.to_f64(),
        });
    }
    let prec = policy.bits;
    let rule = gauss_legendre(order, prec)?;
    let xs = rule.nodes.clone();
    let xc = x.with_prec(prec);
    let f = move |idx: &[usize]| -> Complex {
        let mut prod = Complex::one(prec);
        for &i in idx {
            prod = prod.mul(&xc.sub(&Complex::real(xs[i].clone())));
        }
        prod
    };
    let num = tensor_heine(n, omega, order, policy, Some(&f))?;
    Ok(num.div(&den))
}

/// Order heuristic resolving the oscillation: max(30, 3|omega| + n^2).
pub fn recommended_order(n: usize, omega_abs: f64) -> usize {
    (30.0f64).max(3.0 * omega_abs + (n * n) as f64).ceil() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hankel;
    use crate::numerics::rel_diff;
    use crate::orthopoly;
    use rug::ops::Pow;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn two_point_rule() {
        let rule = gauss_legendre(2, 256).unwrap();
        let r = Float::with_val(256, 3).sqrt().recip();
        assert!((rule.nodes[0].clone() + &r).abs().to_f64() < 1e-70);
        assert!((rule.nodes[1].clone() - &r).abs().to_f64() < 1e-70);
        assert!((rule.weights[0].to_f64() - 1.0).abs() < 1e-70);
        assert!((rule.weights[1].to_f64() - 1.0).abs() < 1e-70);
    }

    #[test]
    fn one_point_rule() {
        let rule = gauss_legendre(1, 256).unwrap();
        assert!(rule.nodes[0].is_zero());
        assert_eq!(rule.weights[0].to_f64(), 2.0);
    }

    #[test]
    fn exactness_on_monomials() {
        // order-3 rule integrates x^4 to 2/5 exactly
        let rule = gauss_legendre(3, 256).unwrap();
        let mut acc = Float::new(256);
        for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
            acc += x.clone().pow(4) * w;
        }
        assert!((acc.to_f64() - 0.4).abs() < 1e-70);
        // weights sum to 2
        let mut s = Float::new(256);
        for w in &rule.weights {
            s += w;
        }
        assert!((s.to_f64() - 2.0).abs() < 1e-70);
    }

    #[test]
    fn heine_reduces_to_first_moment() {
        let p = policy();
        let w = Float::with_val(p.bits, 2.5);
        let v = heine_hankel(1, &w, 40, &p).unwrap();
        let mu0 = crate::closedforms::h0(&w);
        assert!((v.re.clone() - &mu0).abs().to_f64() < 1e-40);
        assert!(v.im.clone().abs().to_f64() < 1e-40);
    }

    #[test]
    fn heine_matches_h1_closed_form() {
        let p = policy();
        let w = Float::with_val(p.bits, 1);
        let v = heine_hankel(2, &w, 50, &p).unwrap();
        let expected = crate::closedforms::h1(&w);
        assert!(((v.re.clone() - &expected) / expected).abs().to_f64() < 1e-10);
        assert!((v.re.to_f64() - 1.1677063269057152).abs() < 1e-10);
    }

    #[test]
    fn heine_matches_determinant_route() {
        let p = policy();
        let w = Float::with_val(p.bits, 5);
        let v = heine_hankel(3, &w, 60, &p).unwrap();
        let det = hankel::hankel_det(2, &w, &p).unwrap().det;
        let rel = ((v.re.clone() - &det) / det).abs();
        assert!(rel.to_f64() < 1e-10);
    }

    #[test]
    fn heine_poly_legendre_cases() {
        let p = policy();
        let zero = Float::with_val(p.bits, 0);
        let v = heine_poly(1, &zero, &Complex::one(p.bits), 30, &p).unwrap();
        assert!(rel_diff(&v, &Complex::one(p.bits)).to_f64() < 1e-20);
        let root = Complex::real(Float::with_val(p.bits, 3).sqrt().recip());
        let v = heine_poly(2, &zero, &root, 30, &p).unwrap();
        assert!(v.abs().to_f64() < 1e-20);
    }

    #[test]
    fn heine_poly_matches_linear_system_route() {
        let p = policy();
        let w = Float::with_val(p.bits, 3);
        let x = Complex::from_f64(p.bits, 0.5, 0.1);
        let via_heine = heine_poly(2, &w, &x, 50, &p).unwrap();
        let poly = orthopoly::monic_op(2, &w, &p).unwrap();
        let via_solve = poly.evaluate(&x);
        assert!(rel_diff(&via_heine, &via_solve).to_f64() < 1e-10);
    }

    #[test]
    fn budget_cap() {
        let p = policy();
        let w = Float::with_val(p.bits, 1);
        let got = heine_hankel(4, &w, 100, &p);
        assert!(matches!(got, Err(Error::CostCapExceeded { .. })));
    }

    #[test]
    fn quadrature_convergence_plateau() {
        // doubling the order shrinks the discrepancy until roundoff
        let p = policy();
        let w = Float::with_val(p.bits, 2);
        let det = hankel::hankel_det(1, &w, &p).unwrap().det;
        let mut errs = Vec::new();
        for order in [8usize, 16, 32] {
            let v = heine_hankel(2, &w, order, &p).unwrap();
            errs.push(((v.re.clone() - &det) / &det).abs().to_f64());
        }
        assert!(errs[1] < errs[0]);
        assert!(errs[2] < 1e-25);
    }
}

//! The additive theta lift and the commutation of lifts with pullbacks.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gegenbauer::multi_indices;
use crate::jacobi::{dev_coeff_vvmf, hyperbolic_tail, theta_decompose, JacobiFormExpansion, VVMFExpansion};
use crate::lattice::{discriminant_group, enumerate_dual, DualVector, GramLattice, SublatticeSplit};
use crate::ortho::{pullback_cycle, ConeRegion, OrthoFormExpansion};
use crate::series::{fmt_rat, int, pow, rat, Rational};

/// `k` with `weight(F) = k + 1 - dim/2`; must be an integer.
fn lift_weight(f: &VVMFExpansion) -> Result<i64> {
    let k = f.weight() - int(1) + rat(f.lattice().dim() as i64, 2);
    if !k.is_integer() {
        return Err(Error::Structural(format!("lift weight {} is not an integer", fmt_rat(&k))));
    }
    Ok(k.to_integer().to_i64().expect("small weight"))
}

/// `a(nu) = sum_{d >= 1, nu/d in L'} d^{k-1} c(Q(nu/d), nu/d + L)` on the
/// cone region; only positive-norm indices occur.
pub fn theta_lift(f: &VVMFExpansion, region: &ConeRegion) -> Result<OrthoFormExpansion> {
    let lat = f.lattice();
    if !lat.is_lorentzian() {
        return Err(Error::Signature("theta lift needs a Lorentzian lattice".into()));
    }
    let k = lift_weight(f)?;
    let g = f.group();
    let mut terms = Vec::new();
    for nu in enumerate_dual(lat, &region.to_dual_region())? {
        let q = lat.norm(&nu);
        if !q.is_positive() {
            continue;
        }
        if &q > f.bound() {
            return Err(Error::Precision(format!(
                "lift at norm {} needs the input beyond q^{}",
                fmt_rat(&q),
                fmt_rat(f.bound())
            )));
        }
        let content = lat
            .pairings(&nu)
            .iter()
            .map(|x| x.to_integer())
            .fold(num_bigint::BigInt::zero(), |a, b| a.gcd(&b))
            .to_i64()
            .expect("small content");
        let mut a = Rational::zero();
        for d in 1..=content {
            if content % d != 0 {
                continue;
            }
            let v: DualVector = nu.iter().map(|x| x / int(d)).collect();
            let c = f.coeff(&g.class_of(&v), &(&q / int(d * d)));
            if !c.is_zero() {
                a += pow(&int(d), (k - 1) as u32) * c;
            }
        }
        terms.push((nu, a));
    }
    OrthoFormExpansion::new(lat.clone(), int(k), region.clone(), true, terms)
}

/// The lattice `II_{1,1} + L(-1)` with the hyperbolic pair first.
pub fn gritsenko_lattice(l: &GramLattice) -> Result<GramLattice> {
    let hyp = GramLattice::new(vec![vec![0, 1], vec![1, 0]])?;
    Ok(hyp.direct_sum(&l.negated()))
}

/// Theta lift of the theta decomposition of a Jacobi form, on
/// `II_{1,1} + L(-1)`; the orthogonal weight equals the Jacobi weight.
pub fn gritsenko_lift(phi: &JacobiFormExpansion, region: &ConeRegion) -> Result<OrthoFormExpansion> {
    let vv = theta_decompose(phi)?;
    let lat = gritsenko_lattice(phi.index())?;
    hyperbolic_tail(&lat)?;
    let big = discriminant_group(&lat)?;
    let terms: Vec<_> = vv
        .coeffs()
        .iter()
        .map(|((g, n), c)| {
            let x = vv.group().representative(g);
            let mut amb = vec![Rational::zero(), Rational::zero()];
            amb.extend(x);
            ((big.class_of(&amb), n.clone()), c.clone())
        })
        .collect();
    let f = VVMFExpansion::with_group(big, vv.weight().clone(), vv.bound().clone(), terms)?;
    theta_lift(&f, region)
}

/// One coefficientwise disagreement between the two sides of the
/// pullback/lift commutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftDiff {
    pub index: DualVector,
    pub component: Vec<usize>,
    pub pullback_of_lift: Rational,
    pub lift_of_development: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommutationReport {
    pub compared: usize,
    pub nonzero: usize,
    pub diffs: Vec<LiftDiff>,
}

impl CommutationReport {
    pub fn is_ok(&self) -> bool {
        self.diffs.is_empty()
    }
}

/// Compares the `N`-th pullback of `Phi_F` to the cycle of `split` with the
/// lift of the `N`-th development coefficient of `F` along the same
/// sublattice, tensor component by tensor component.
pub fn check_lift_commutes(f: &VVMFExpansion, split: &SublatticeSplit, n: u32, region: &ConeRegion) -> Result<CommutationReport> {
    let phi = theta_lift(f, region)?;
    let (lhs, _) = pullback_cycle(&phi, split, n)?;
    let dev = dev_coeff_vvmf(f, split, n)?;
    let mut report = CommutationReport::default();
    for idx in multi_indices(n as usize, lhs.dim) {
        let left = lhs.component(&idx)?;
        let right = theta_lift(&dev.component(&idx)?, &lhs.region)?;
        let l = left.lattice();
        for x in enumerate_dual(l, &lhs.region.to_dual_region())? {
            let (a, b) = (left.coeff(&x), right.coeff(&x));
            report.compared += 1;
            if !a.is_zero() {
                report.nonzero += 1;
            }
            if a != b {
                report.diffs.push(LiftDiff { index: x, component: idx.clone(), pullback_of_lift: a, lift_of_development: b });
            }
        }
    }
    Ok(report)
}

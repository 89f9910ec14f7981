//! Fast self-check of the numerical invariants, run by the `validate` command.

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::linalg::{kron_vec, ComplexMatrix};
use crate::measures::{closed_tangle_analytic, pure_tangle, wootters_tangle, InitialState};
use crate::params::SimParams;
use crate::state::{DensityOperator, PureState};
use crate::symmetric::{run_closed_evolution, run_full_evolution};
use crate::trajectory::tangle_upper_bound;

const AREA_BAR: f64 = 1000.0;
const MODES: usize = 200;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

fn params(state: InitialState, gamma_tau: f64) -> Result<SimParams> {
    SimParams::new(AREA_BAR, MODES, gamma_tau, state.atom_state())
}

fn measures() -> Result<Vec<Check>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell =
        PureState::new(vec![C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)], vec![2, 2])?;
    let product = PureState::new(
        kron_vec(&[C64::new(0.6, 0.0), C64::new(0.0, 0.8)], &[C64::new(h, 0.0), C64::new(-h, 0.0)]),
        vec![2, 2],
    )?;
    let t_bell = pure_tangle(&bell)?.value();
    let t_product = pure_tangle(&product)?.value();

    let p = 0.5;
    let bell_rho = ComplexMatrix::outer(bell.amplitudes(), bell.amplitudes());
    let werner = &bell_rho.scale(C64::new(p, 0.0)) + &ComplexMatrix::identity(4).scale(C64::new((1.0 - p) / 4.0, 0.0));
    let t_werner = wootters_tangle(&DensityOperator::new(werner, vec![2, 2])?)?.value();
    let expected = ((3.0 * p - 1.0) / 2.0f64).max(0.0).powi(2);

    Ok(vec![
        check("bell state tangle", (t_bell - 1.0).abs() < 1e-12, format!("{t_bell:.3e}")),
        check("product state tangle", t_product.abs() < 1e-12, format!("{t_product:.3e}")),
        check("werner state tangle", (t_werner - expected).abs() < 1e-10, format!("{t_werner:.6e} vs {expected:.6e}")),
    ])
}

fn dynamics() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let p = params(InitialState::PlusY, 1e-3)?;
    let closed = run_closed_evolution(&p)?.final_tangle();
    let analytic = closed_tangle_analytic(&p.initial, p.kappa_tau()).value();
    let rel = (closed - analytic).abs() / analytic;
    checks.push(check("closed evolution vs first-order formula", rel < 0.02, format!("relative {rel:.2e}")));

    let full = run_full_evolution(&p)?.final_tangle();
    let rel = (full - closed).abs() / closed;
    checks.push(check("full vs closed at small emission", rel < 10.0 * 1e-3, format!("relative {rel:.2e}")));

    let plus = run_full_evolution(&params(InitialState::PlusX, 0.5)?)?;
    let minus = run_full_evolution(&params(InitialState::MinusX, 0.5)?)?;
    let gap = plus.entries.iter().zip(&minus.entries).map(|(a, b)| (a.tangle - b.tangle).abs()).fold(0.0, f64::max);
    checks.push(check("+x and -x series coincide", gap < 1e-9, format!("max gap {gap:.2e}")));

    for gamma_tau in [1e-2, 1.0] {
        let p = params(InitialState::PlusY, gamma_tau)?;
        let bound = tangle_upper_bound(&p)?;
        let full = run_full_evolution(&p)?.final_tangle();
        let closure = bound.statistics.closure_defect();
        checks.push(check(
            "bound dominates full tangle",
            bound.bound >= full,
            format!("gamma_tau {gamma_tau:e}: {:.4e} >= {full:.4e}", bound.bound),
        ));
        checks.push(check("jump probabilities close", closure.abs() < 1e-8, format!("defect {closure:.1e}")));
    }
    Ok(checks)
}

type CheckGroup = fn() -> Result<Vec<Check>>;

/// Runs every check at reduced resolution. Errors inside a group are turned
/// into a failed check rather than propagated.
pub fn run_checks() -> Vec<Check> {
    let groups: [(&'static str, CheckGroup); 2] = [("measures", measures), ("dynamics", dynamics)];
    groups.into_iter().flat_map(|(name, f)| f().unwrap_or_else(|e| vec![check(name, false, e.to_string())])).collect()
}

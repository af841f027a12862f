//! Column schemas of the CSV written for each experiment kind.

use super::config::ExperimentKind;

pub struct Column {
    pub name: &'static str,
    pub description: &'static str,
}

const fn col(name: &'static str, description: &'static str) -> Column {
    Column { name, description }
}

const CLASSICAL_DIFFUSION: &[Column] = &[
    col("step", "explicit step index, 0 is the initial density"),
    col("t", "pseudo-time step * dt"),
    col("entropy", "continuum entropy S(rho_t; rho*)"),
    col("gain", "S(rho_t) - S(rho_0)"),
    col("lower", "lower bound on gain (0)"),
    col("upper", "upper bound on gain: ln(rho* V) - S(rho_0)"),
    col("mass", "integral of rho_t"),
    col("entropyRate", "dS/dt from the flux quadrature"),
    col("monotoneOk", "entropy did not decrease since the previous row (tol 1e-12)"),
    col("massOk", "mass within 1e-12 of the initial mass"),
    col("boundsOk", "lower <= gain <= upper (tol 1e-9)"),
];

const CLASSICAL_BOX_FLOW: &[Column] = &[
    col("step", "explicit step index"),
    col("t", "pseudo-time"),
    col("continuumEntropy", "S(rho_t; rho*)"),
    col("boxEntropy", "Shannon entropy S_B of the box probabilities"),
    col("boxedEntropy", "S(rho_B; rho*) = S_B + ln(rho* Vbar)"),
    col("meanVolume", "geometric-mean box volume Vbar"),
    col("hidden", "hidden information S(rho_B) - S(rho_t)"),
    col("lower", "lower bound on hidden (0)"),
    col("upper", "upper bound on hidden: ln(rho* V) - S(rho_t)"),
    col("monotoneOk", "boxedEntropy did not decrease (tol 1e-9)"),
    col("boundsOk", "lower <= hidden <= upper (tol 1e-9)"),
];

const AGGREGATION_SWEEP: &[Column] = &[
    col("round", "aggregation round, 0 is the initial vector"),
    col("a", "first index of the pair merged this round"),
    col("b", "second index of the pair merged this round"),
    col("entropy", "Shannon entropy after the round"),
    col("gain", "S - S_0"),
    col("lower", "lower bound on gain (0)"),
    col("upper", "upper bound on gain: ln N - S_0"),
    col("negentropy", "ln N - S"),
    col("monotoneOk", "entropy did not decrease (tol 1e-12)"),
    col("boundsOk", "lower <= gain <= upper (tol 1e-9)"),
];

const QUANTUM_FAMILY_CURVE: &[Column] = &[
    col("s", "tuning parameter"),
    col("entropy", "von Neumann entropy S(rho_s)"),
    col("hidden", "S(rho_s) - S(rho_0)"),
    col("lower", "family lower bound on hidden"),
    col("upper", "family upper bound on hidden"),
    col("monotoneOk", "entropy did not decrease along s (tol 1e-9)"),
    col("boundsOk", "lower <= hidden <= upper (tol 1e-9)"),
];

const HILBERT_DIFFUSION: &[Column] = &[
    col("t", "diffusion time"),
    col("entropy", "S(exp(t Delta) rho)"),
    col("hidden", "S(rho_t) - S(rho_0)"),
    col("lower", "lower bound on hidden (0)"),
    col("upper", "upper bound on hidden: ln N - S(rho_0)"),
    col("distanceToMixed", "Frobenius distance to I/N"),
    col("monotoneOk", "entropy did not decrease along t (tol 1e-9)"),
    col("boundsOk", "lower <= hidden <= upper (tol 1e-9)"),
];

const PARTIAL_TRACE_DIFFUSION: &[Column] = &[
    col("t", "diffusion time"),
    col("s", "equivalent tuning parameter 1 - exp(-t)"),
    col("entropy", "S(rho_t)"),
    col("hidden", "S(rho_t) - S_AB"),
    col("lower", "s (S_A + S_B - S_AB)"),
    col("upper", "2 min(S_A, S_B)"),
    col("monotoneOk", "entropy did not decrease along t (tol 1e-9)"),
    col("boundsOk", "lower <= hidden <= upper (tol 1e-9)"),
];

const AUDIT_ALL: &[Column] = &[
    col("suite", "invariant suite name"),
    col("checked", "number of individual checks"),
    col("worstMargin", "smallest slack observed (negative beyond tolerance means failure)"),
    col("passed", "every check in the suite held"),
];

pub fn columns(kind: ExperimentKind) -> &'static [Column] {
    match kind {
        ExperimentKind::ClassicalDiffusion => CLASSICAL_DIFFUSION,
        ExperimentKind::ClassicalBoxFlow => CLASSICAL_BOX_FLOW,
        ExperimentKind::AggregationSweep => AGGREGATION_SWEEP,
        ExperimentKind::QuantumFamilyCurve => QUANTUM_FAMILY_CURVE,
        ExperimentKind::HilbertDiffusion => HILBERT_DIFFUSION,
        ExperimentKind::PartialTraceDiffusion => PARTIAL_TRACE_DIFFUSION,
        ExperimentKind::AuditAll => AUDIT_ALL,
    }
}

pub fn column_names(kind: ExperimentKind) -> Vec<&'static str> {
    columns(kind).iter().map(|c| c.name).collect()
}

/// Human-readable schema, one column per line.
pub fn describe(kind: ExperimentKind) -> String {
    let cols = columns(kind);
    let width = cols.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = format!("{kind}\n");
    for c in cols {
        out.push_str(&format!("  {:width$}  {}\n", c.name, c.description));
    }
    out
}

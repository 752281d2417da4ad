use gbqpe::groebner::{buchberger, GroebnerBasis, GroebnerLimits};
use gbqpe::hf_builder::{build_hf_ideal, build_qubo_ideal, build_toy_ideal, ObjectiveSpec, QuboModel, ToyModelSpec};
use gbqpe::linalg::{c, complexify, CMatrix, CVector};
use gbqpe::polyring::{format_rational, parse_rational, to_f64};
use gbqpe::qblock::{
    evolution_operator, fable_compress, inverse_power_filter, multi_qpe, qpe_simulate, BlockEncoding, FilterOptions,
    FilterSample, MultiQpeOptions, QpeOptions, SpectralScaling, StateVector,
};
use gbqpe::quotient::{standard_monomials, MultMatrixSet};
use gbqpe::rootfind::{filter_real, solve_system, RootSet, SolveOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::input::{ideal_doc, IdealDoc, LoadedIdeal, SCHEMA};

/// The stored basis when the input is already a verified reduced basis under
/// the requested order, otherwise a fresh Buchberger run.
pub fn basis_of(loaded: &LoadedIdeal) -> Result<GroebnerBasis, CliError> {
    if loaded.is_basis {
        let gb = GroebnerBasis::from_reduced(loaded.ideal.generators().to_vec(), loaded.ideal.order().clone())?;
        if gb.is_groebner() && gb.check_reduced() {
            return Ok(gb);
        }
    }
    Ok(buchberger(&loaded.ideal, GroebnerLimits::default())?)
}

#[derive(Serialize)]
struct GroebnerDoc {
    #[serde(flatten)]
    ideal: IdealDoc,
    leading_monomials: Vec<String>,
    zero_dimensional: bool,
    quotient_dimension: Option<usize>,
    standard_monomials: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

pub fn groebner(loaded: &LoadedIdeal) -> Result<Value, CliError> {
    let gb = basis_of(loaded)?;
    let ord = gb.order();
    let names = gb.ring().vars();
    let polynomials = gb.elements().iter().map(|p| p.to_string_with(ord)).collect();
    let quotient = standard_monomials(&gb);
    let doc = GroebnerDoc {
        ideal: IdealDoc {
            schema: Some(SCHEMA.into()),
            kind: Some("groebner".into()),
            variables: names.to_vec(),
            order: Some(ord.kind()),
            precedence: Some(ord.precedence_names(gb.ring())),
            polynomials,
        },
        leading_monomials: gb.leading_monomials().iter().map(|m| m.display(names).to_string()).collect(),
        zero_dimensional: quotient.is_ok(),
        quotient_dimension: quotient.as_ref().ok().map(|q| q.len()),
        standard_monomials: quotient.as_ref().ok().map(|q| q.labels()),
        note: quotient.err().map(|e| e.to_string()),
    };
    Ok(serde_json::to_value(doc)?)
}

pub struct SolveArgs {
    pub real_only: bool,
    pub real_tol: Option<f64>,
    pub decompose: Option<String>,
}

fn solve_roots(gb: &GroebnerBasis, args: &SolveArgs) -> Result<(MultMatrixSet, RootSet), CliError> {
    let set = MultMatrixSet::new(gb)?;
    let opts = SolveOptions {
        decompose: args.decompose.clone(),
        real_tol: args.real_tol,
        ..Default::default()
    };
    let mut rs = solve_system(&set, &opts)?;
    if args.real_only {
        rs = filter_real(&rs, rs.real_tol);
    }
    Ok((set, rs))
}

pub fn solve(loaded: &LoadedIdeal, args: &SolveArgs) -> Result<Value, CliError> {
    let gb = basis_of(loaded)?;
    let (set, rs) = solve_roots(&gb, args)?;
    Ok(json!({
        "schema": SCHEMA,
        "kind": "roots",
        "order": gb.order().kind(),
        "precedence": gb.order().precedence_names(gb.ring()),
        "basis": set.basis().labels(),
        "real_only": args.real_only,
        "max_residual": rs.max_residual(),
        "residuals_ok": rs.residuals_ok(),
        "variables": rs.variables,
        "real_tol": rs.real_tol,
        "eval_tol": rs.eval_tol,
        "discarded": rs.discarded,
        "roots": rs.roots,
    }))
}

/// `toy`, `heh`, or a path to an objective listing in `(R, x, y, e)`.
pub fn hf_build_ideal(fixture: &str, fix_r: Option<&str>) -> Result<Value, CliError> {
    let ideal = if fixture == "toy" {
        if fix_r.is_some() {
            return Err(CliError::Usage("--fix-R does not apply to the toy model".into()));
        }
        build_toy_ideal(&ToyModelSpec::default())?
    } else {
        let mut spec = if fixture == "heh" {
            ObjectiveSpec::heh_plus()
        } else {
            ObjectiveSpec::from_listing(&crate::input::read_input(std::path::Path::new(fixture))?)?
        };
        if let Some(r) = fix_r {
            spec = spec.with_fixed_r(parse_rational(r)?);
        }
        build_hf_ideal(&spec)?
    };
    Ok(serde_json::to_value(ideal_doc("ideal", &ideal))?)
}

#[derive(Serialize)]
struct QuboRoot {
    assignment: Vec<u8>,
    energy: f64,
    energy_exact: String,
}

pub fn qubo(text: &str) -> Result<Value, CliError> {
    let model = QuboModel::from_json(text).map_err(CliError::Parse)?;
    let ideal = build_qubo_ideal(&model)?;
    let gb = buchberger(&ideal, GroebnerLimits::default())?;
    let args = SolveArgs {
        real_only: false,
        real_tol: None,
        decompose: None,
    };
    let (_, rs) = solve_roots(&gb, &args)?;
    let n = model.num_vars();
    let mut roots = Vec::with_capacity(rs.len());
    for r in &rs.roots {
        if r.max_imag() > 1e-6 {
            return Err(CliError::Numeric("QUBO root with a complex component".into()));
        }
        let vals = r.real_values();
        let mut assignment = Vec::with_capacity(n);
        for &v in &vals[..n] {
            let b = v.round();
            if (v - b).abs() > 1e-6 || !(b == 0.0 || b == 1.0) {
                return Err(CliError::Numeric(format!("QUBO root component {v} is not binary")));
            }
            assignment.push(b as u8);
        }
        let bits: Vec<bool> = assignment.iter().map(|&b| b == 1).collect();
        roots.push(QuboRoot {
            assignment,
            energy: vals[n],
            energy_exact: format_rational(&model.energy(&bits)),
        });
    }
    roots.sort_by(|a, b| a.assignment.cmp(&b.assignment));
    let enumeration = model.enumerate();
    let matches = roots.len() == enumeration.len()
        && enumeration.iter().all(|(bits, e)| {
            let want: Vec<u8> = bits.iter().map(|&b| b as u8).collect();
            roots
                .iter()
                .any(|r| r.assignment == want && (r.energy - to_f64(e)).abs() <= 1e-8 * (1.0 + to_f64(e).abs()))
        });
    let ground = enumeration.iter().map(|(_, e)| e.clone()).min().expect("at least one assignment");
    let ground_states: Vec<&Vec<u8>> = roots
        .iter()
        .filter(|r| r.energy_exact == format_rational(&ground))
        .map(|r| &r.assignment)
        .collect();
    Ok(json!({
        "schema": SCHEMA,
        "kind": "qubo",
        "num_vars": n,
        "roots": roots,
        "ground_energy": format_rational(&ground),
        "ground_states": ground_states,
        "matches_enumeration": matches,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingMode {
    Identity,
    Gershgorin,
}

pub struct QpeArgs {
    pub bits: usize,
    pub seed: u64,
    pub shifts: Vec<f64>,
    pub shift_var: Option<String>,
    pub state: Option<CVector>,
    pub real_guard: bool,
    pub scaling: Option<ScalingMode>,
    pub iterations: usize,
    pub prune_tol: f64,
}

fn pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// Explicit state, or a seeded random real state, optionally passed through
/// the inverse-power filter at each shift and recombined with seeded weights.
fn initial_state(a: &CMatrix, args: &QpeArgs, rng: &mut ChaCha8Rng) -> Result<(CVector, Vec<FilterSample>), CliError> {
    let dim = a.nrows();
    if let Some(s) = &args.state {
        if s.len() != dim {
            return Err(CliError::Usage(format!("--state has {} entries, expected {dim}", s.len())));
        }
        return Ok((s.clone(), Vec::new()));
    }
    let psi = CVector::from_fn(dim, |_, _| c(rng.random_range(-1.0..1.0), 0.0));
    if args.shifts.is_empty() {
        return Ok((psi, Vec::new()));
    }
    let shifts: Vec<_> = args.shifts.iter().map(|&s| c(s, 0.0)).collect();
    let opts = FilterOptions {
        iterations: args.iterations,
        ..Default::default()
    };
    let samples = inverse_power_filter(a, &shifts, &psi, &opts)?;
    let mut out = CVector::zeros(dim);
    for s in &samples {
        let w = if samples.len() == 1 { 1.0 } else { rng.random_range(-1.0..1.0) };
        out += &s.state * c(w, 0.0);
    }
    Ok((out, samples))
}

pub fn qpe_matrix(a: &CMatrix, args: &QpeArgs) -> Result<Value, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (psi, samples) = initial_state(a, args, &mut rng)?;
    let scaling = match args.scaling.unwrap_or(ScalingMode::Identity) {
        ScalingMode::Identity => SpectralScaling::IDENTITY,
        ScalingMode::Gershgorin => SpectralScaling::gershgorin(a),
    };
    let w = evolution_operator(a, &scaling);
    let be = BlockEncoding::encode(&w, None)?;
    let opts = QpeOptions {
        bits: args.bits,
        scaling,
        ..Default::default()
    };
    let state = StateVector::signal(psi.clone())?;
    let result = qpe_simulate(&be, &state, &opts)?;
    let circuit = fable_compress(&w, args.prune_tol)?;
    Ok(json!({
        "schema": SCHEMA,
        "kind": "qpe",
        "mode": "matrix",
        "seed": args.seed,
        "initial_state": pairs(&state.amplitudes),
        "filter": samples,
        "circuit": {
            "num_qubits": circuit.num_qubits,
            "prune_tol": circuit.prune_tol,
            "rotations_naive": circuit.rotations_naive,
            "rotations": circuit.rotations,
            "cnots_naive": circuit.cnots_naive,
            "cnots": circuit.cnots,
        },
        "result": result,
    }))
}

pub fn qpe_ideal(loaded: &LoadedIdeal, args: &QpeArgs) -> Result<Value, CliError> {
    let gb = basis_of(loaded)?;
    let set = MultMatrixSet::new(&gb)?;
    let labels = set.variables().to_vec();
    let ts: Vec<CMatrix> = set.transposes_f64().iter().map(complexify).collect();
    let target = match &args.shift_var {
        Some(v) => labels
            .iter()
            .position(|l| l == v)
            .ok_or_else(|| CliError::Usage(format!("unknown variable `{v}` for --shift-var")))?,
        None => labels.len() - 1,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (psi, samples) = initial_state(&ts[target], args, &mut rng)?;
    let state = StateVector::signal(psi)?;
    let opts = MultiQpeOptions {
        bits: args.bits,
        labels: Some(labels.clone()),
        real_guard: args.real_guard,
        scalings: match args.scaling {
            Some(ScalingMode::Identity) => Some(vec![SpectralScaling::IDENTITY; ts.len()]),
            _ => None,
        },
        ..Default::default()
    };
    let result = multi_qpe(&ts, &state, &opts)?;
    Ok(json!({
        "schema": SCHEMA,
        "kind": "qpe",
        "mode": "ideal",
        "seed": args.seed,
        "basis": set.basis().labels(),
        "shift_variable": labels[target],
        "initial_state": pairs(&state.amplitudes),
        "filter": samples,
        "result": result,
    }))
}

use fclosure_core::graded::{
    branch_count, find_linear_reduction, probe_power_closure, BranchOptions, GradedError, GradedQuotient, HomogPoly,
    Reducedness,
};
use fclosure_core::oracle::{hypersurface_branches, random_squarefree_binary_form, Crosscheck};
use fclosure_core::semigroup::{parse_semigroup, parse_vectors, AffineSemigroup, SemigroupError, DEFAULT_E_MAX};
use fclosure_core::{FieldDescriptor, FieldError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::{AnalysisReport, AnalysisResult, Diagnostics, ProbeSummary};
use crate::request::{AnalysisRequest, Mode};
use crate::CliError;

/// Probe depth for the degree-`n` Frobenius-closure check when `--e-max`
/// is not given.
pub const DEFAULT_PROBE_E: u32 = 3;

pub(crate) enum Prepared {
    Ring(GradedQuotient),
    Semigroup { a: AffineSemigroup, ideal: Option<Vec<Vec<i64>>>, element: Option<Vec<i64>> },
}

fn graded_parse(field: String, e: GradedError) -> CliError {
    match e {
        GradedError::Parse { position, expected } => CliError::Parse { field, position, expected },
        GradedError::NotHomogeneous { position, term, expected, found } => CliError::Parse {
            field,
            position,
            expected: format!("a term of degree {expected} (`{term}` has degree {found})"),
        },
        other => CliError::Graded(other),
    }
}

fn semigroup_parse(field: &str, e: SemigroupError) -> CliError {
    match e {
        SemigroupError::Parse { position, expected } => CliError::Parse { field: field.into(), position, expected },
        other => CliError::Semigroup(other),
    }
}

fn field_of(req: &AnalysisRequest) -> Result<FieldDescriptor, FieldError> {
    if req.ext_s == 1 {
        FieldDescriptor::prime(req.p)
    } else {
        FieldDescriptor::with_degree(req.p, req.ext_s)
    }
}

fn sampled_form(req: &AnalysisRequest, k: &FieldDescriptor) -> Result<String, CliError> {
    let (seed, degree) = (req.seed.unwrap_or(0), req.degree.unwrap_or(0));
    if degree == 0 {
        return Err(CliError::Invalid("--degree must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_squarefree_binary_form(k, degree, &mut rng).format(&req.vars))
}

/// The relations actually analysed: the given ones, or for a seeded
/// hypersurface request the sampled form.
fn relations(req: &AnalysisRequest) -> Result<Vec<String>, CliError> {
    if req.mode == Mode::Hypersurface && req.relations.is_empty() {
        let k = field_of(req)?;
        return Ok(vec![sampled_form(req, &k)?]);
    }
    Ok(req.relations.clone())
}

pub(crate) fn prepare(req: &AnalysisRequest) -> Result<Prepared, CliError> {
    match req.mode {
        Mode::GradedBranches | Mode::Hypersurface => {
            let k = field_of(req)?;
            let mut rels = Vec::new();
            for (i, text) in relations(req)?.iter().enumerate() {
                let f = HomogPoly::parse(&k, &req.vars, text).map_err(|e| graded_parse(format!("--rel #{}", i + 1), e))?;
                rels.push(f);
            }
            Ok(Prepared::Ring(GradedQuotient::new(&k, req.vars.clone(), rels)?))
        }
        Mode::SemigroupFnilpotent | Mode::SemigroupFte | Mode::SemigroupTightMembership => {
            FieldDescriptor::prime(req.p)?;
            let text = req.generators.as_deref().unwrap_or_default();
            let mut a = parse_semigroup(text).map_err(|e| semigroup_parse("--gens", e))?;
            if let Some(f) = req.box_factor {
                if f < 1 {
                    return Err(CliError::Invalid("--box-factor must be positive".into()));
                }
                a = a.with_box_factor(f);
            }
            let ideal = match &req.ideal {
                Some(t) => Some(parse_vectors(t, a.dim()).map_err(|e| semigroup_parse("--ideal", e))?),
                None => None,
            };
            let element = match &req.element {
                Some(t) => {
                    let mut v = parse_vectors(t, a.dim()).map_err(|e| semigroup_parse("--element", e))?;
                    if v.len() != 1 {
                        return Err(CliError::Invalid("--element takes a single vector".into()));
                    }
                    v.pop()
                }
                None => None,
            };
            if req.mode == Mode::SemigroupFte && !a.is_numerical() {
                return Err(CliError::Semigroup(SemigroupError::NotNumerical));
            }
            Ok(Prepared::Semigroup { a, ideal, element })
        }
    }
}

fn probe(ring: &GradedQuotient, req: &AnalysisRequest, n: u32, diag: &mut Diagnostics) -> Result<ProbeSummary, CliError> {
    let red = find_linear_reduction(ring, req.s_max)?;
    let p = red.ring.field().characteristic();
    let wanted = req.e_max.unwrap_or(DEFAULT_PROBE_E);
    let fits = |e: u32| p.checked_pow(e).and_then(|q| q.checked_mul(u64::from(n.max(1)))).is_some_and(|d| d <= req.degree_cap);
    let Some(e_max) = (0..=wanted).rev().find(|&e| fits(e)) else {
        diag.caps_hit.push(format!("closure probe skipped: degree {n} exceeds cap {}", req.degree_cap));
        return Ok(ProbeSummary { degree: n, e_max: 0, agree: true, skipped: true, probes: Vec::new() });
    };
    if e_max < wanted {
        diag.caps_hit.push(format!("closure probe limited to e <= {e_max} by degree cap {}", req.degree_cap));
    }
    let probes = probe_power_closure(&red.ring, &red.form, n, e_max, req.degree_cap)?;
    let agree = probes.iter().all(|p| p.agrees());
    Ok(ProbeSummary { degree: n, e_max, agree, skipped: false, probes })
}

/// Dispatches a validated request.
pub fn run(req: &AnalysisRequest) -> Result<AnalysisReport, CliError> {
    let prepared = prepare(req)?;
    let mut diag = Diagnostics::new();
    let result = match (req.mode, prepared) {
        (Mode::GradedBranches, Prepared::Ring(ring)) => {
            let opts = BranchOptions { s_max: req.s_max, ..BranchOptions::default() };
            let report = branch_count(&ring, &opts)?;
            diag.reducedness = Some(report.reducedness);
            let closure_probe = probe(&ring, req, report.n_used, &mut diag)?;
            // the closure equality needs a reduced ring; on verified
            // non-reduced input a disagreement is expected, not a defect
            let probe_ok = closure_probe.agree || report.reducedness == Reducedness::NotReduced;
            if !closure_probe.agree && probe_ok {
                diag.notes.push("closure probe disagrees with the slice; the ring is not reduced".into());
            }
            diag.consistent = report.consistent && probe_ok;
            AnalysisResult::Branches { report, closure_probe }
        }
        (Mode::Hypersurface, Prepared::Ring(ring)) => {
            let form = ring.relations().first().cloned().ok_or(CliError::Invalid("the form is zero".into()))?;
            let oracle = hypersurface_branches(&form)?;
            let opts = BranchOptions { s_max: req.s_max, ..BranchOptions::default() };
            let report = branch_count(&ring, &opts)?;
            diag.reducedness = Some(report.reducedness);
            let crosscheck = if report.branches_formula == oracle {
                Crosscheck::Match { branches: oracle }
            } else {
                Crosscheck::Mismatch { formula: report.branches_formula, oracle }
            };
            diag.consistent = report.consistent && matches!(crosscheck, Crosscheck::Match { .. });
            AnalysisResult::Hypersurface { form: form.format(ring.vars()), oracle_branches: oracle, report, crosscheck }
        }
        (Mode::SemigroupFnilpotent, Prepared::Semigroup { a, .. }) => {
            let report = a.is_f_nilpotent(req.p, req.e_max.unwrap_or(DEFAULT_E_MAX))?;
            let saturation = a.saturation()?;
            diag.notes.push(format!("saturation box {:?}", saturation.box_bound));
            AnalysisResult::Fnilpotency { semigroup: a.to_string(), report }
        }
        (Mode::SemigroupFte, Prepared::Semigroup { a, ideal, .. }) => {
            let e_cap = req.e_max.unwrap_or(DEFAULT_E_MAX);
            let report = a.is_f_nilpotent(req.p, e_cap)?;
            let ideal: Vec<i64> = ideal.unwrap_or_default().into_iter().map(|v| v[0]).collect();
            let fte = a.fte_bruteforce(req.p, &ideal, e_cap, &report)?;
            AnalysisResult::Fte {
                semigroup: a.to_string(),
                ideal,
                fte,
                e0: report.e0(),
                frobenius_number: a.frobenius_number()?,
            }
        }
        (Mode::SemigroupTightMembership, Prepared::Semigroup { a, ideal, element }) => {
            let report = a.is_f_nilpotent(req.p, req.e_max.unwrap_or(DEFAULT_E_MAX))?;
            let ideal = ideal.unwrap_or_default();
            let element = element.unwrap_or_default();
            let member = a.tight_closure_membership_monomial(req.p, &ideal, &element, &report)?;
            let e0 = report.e0().expect("membership succeeded only for F-nilpotent rings");
            AnalysisResult::TightMembership { semigroup: a.to_string(), ideal, element, member, e0 }
        }
        _ => unreachable!("prepare matches the mode"),
    };
    Ok(AnalysisReport::new(req.clone(), result, diag))
}

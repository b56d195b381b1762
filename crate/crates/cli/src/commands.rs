use std::fmt::Write as _;

use liouville_core::aim::{aim_iterate_budgeted, AimError};
use liouville_core::diffalg::{delta_evaluate, delta_universal};
use liouville_core::exact::{parse_qpoly, parse_rational, rational_text, QPoly, Rational, Ring};
use liouville_core::kovacic::{
    canonical_integrability, canonical_solution, has_canonical_sparsity, kovacic_solve,
    KovacicError, LiouvillianSolution, Verdict,
};
use liouville_core::reduce::{
    arithmetic_condition, complete_square, dalembert, monic_rescale, GeneralEquation, ReduceError,
    Rescaled, Sign,
};
use liouville_core::schrod::{
    arithmetic_condition_potential, eigenvalues, solve_at_energy, Analysis, PotentialProblem,
    QuadSurd, SchrodError,
};
use liouville_core::spectral::{spectral_ideal, SpectralError, SpectralIdeal};
use serde_json::{json, Value};

use crate::{CliError, Command, GlobalOpts, Report};

pub(crate) fn dispatch(cmd: &Command, g: &GlobalOpts) -> Result<Report, CliError> {
    match cmd {
        Command::Reduce { p, q, scale, numeric } => reduce(p, q, scale.as_deref(), *numeric),
        Command::Square { m } => square(m),
        Command::Delta { p, a, b, .. } => delta(p.clone(), a.as_deref().zip(b.as_deref()), g),
        Command::Aim {
            l0,
            r0,
            p,
            obstruction_only,
        } => aim(l0, r0, *p, *obstruction_only, g),
        Command::Solve { m, scale } => solve(m, scale.as_deref(), g),
        Command::Canonical { n, d, sign } => canonical(*n, *d, *sign),
        Command::Variety { n, d, sign, full } => variety(*n, d.clone(), *sign, !*full, g),
        Command::Spectrum { u, scale } => spectrum(u, scale.as_deref(), g),
        Command::EigenSolve { u, lambda, scale } => eigen_solve(u, lambda, scale.as_deref(), g),
        Command::Batch { manifest } => crate::batch::batch(manifest),
    }
}

fn poly(text: &str, flag: &str) -> Result<QPoly, CliError> {
    parse_qpoly(text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn rational(text: &str, flag: &str) -> Result<Rational, CliError> {
    parse_rational(text.trim()).ok_or_else(|| CliError::Usage(format!("--{flag}: not a rational number: {text}")))
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

impl From<ReduceError> for CliError {
    fn from(e: ReduceError) -> Self {
        usage(e)
    }
}

impl From<AimError> for CliError {
    fn from(e: AimError) -> Self {
        CliError::Resource(e.to_string())
    }
}

impl From<KovacicError> for CliError {
    fn from(e: KovacicError) -> Self {
        match e {
            KovacicError::DegreeLimit { .. } => CliError::Resource(e.to_string()),
            e => usage(e),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::Budget(b) => b.into(),
            e => usage(e),
        }
    }
}

impl From<SchrodError> for CliError {
    fn from(e: SchrodError) -> Self {
        match e {
            SchrodError::Budget(b) => b.into(),
            SchrodError::Kovacic(k) => k.into(),
            e => usage(e),
        }
    }
}

fn reduce(p: &str, q: &str, scale: Option<&str>, numeric: bool) -> Result<Report, CliError> {
    let eq = GeneralEquation::new(poly(p, "P")?, poly(q, "Q")?);
    let t = dalembert(&eq)?;
    let k = scale.map(|s| rational(s, "scale")).transpose()?;
    let mut json = json!({"R": t.r.to_string(), "gauge": t.gauge, "n": eq.n});
    let mut text = format!("R = {}\ngauge = {}", t.r, t.gauge);
    match monic_rescale(&t.r, k.as_ref(), numeric)? {
        Rescaled::Exact { m, scale } => {
            let _ = write!(text, "\nM = {m} (x -> {}*x)", rational_text(&scale));
            json["M"] = json!(m.to_string());
            json["scale"] = json!(rational_text(&scale));
        }
        Rescaled::Numeric { coeffs, scale } => {
            let _ = write!(text, "\nM coefficients = {coeffs:?} (x -> {scale}*x)");
            json["M_numeric"] = json!(coeffs);
            json["scale_numeric"] = json!(scale);
        }
    }
    Ok(Report::new(json, text))
}

fn pairs_json(pairs: &[(Sign, usize)]) -> Value {
    Value::Array(
        pairs
            .iter()
            .map(|(s, d)| json!({"sign": s.to_string(), "d": d}))
            .collect(),
    )
}

fn square(m: &str) -> Result<Report, CliError> {
    let dec = complete_square(&poly(m, "M")?)?;
    let pairs = arithmetic_condition(&dec)?;
    let top = rational_text(&dec.b_top());
    let mut text = format!("A = {}\nB = {}\nb_{{n-1}} = {top}\n", dec.a, dec.b);
    if pairs.is_empty() {
        text.push_str("arithmetic condition: fails");
    }
    for (s, d) in &pairs {
        let _ = write!(text, "arithmetic condition: sign {s}, d = {d}");
    }
    Ok(Report::new(
        json!({
            "A": dec.a.to_string(),
            "B": dec.b.to_string(),
            "n": dec.n,
            "b_{n-1}": top,
            "arithmetic_condition": pairs_json(&pairs),
        }),
        text,
    ))
}

fn delta(
    range: std::ops::RangeInclusive<usize>,
    at: Option<(&str, &str)>,
    g: &GlobalOpts,
) -> Result<Report, CliError> {
    if *range.end() > g.max_p {
        return Err(CliError::Resource(format!(
            "p = {} exceeds max-p = {}",
            range.end(),
            g.max_p
        )));
    }
    let pair = match at {
        Some((a, b)) => Some((poly(a, "A")?, poly(b, "B")?)),
        None => None,
    };
    let mut rows = Vec::new();
    let mut text = String::new();
    for p in range.clone() {
        let value = match &pair {
            Some((a, b)) => delta_evaluate(p, a, b).to_string(),
            None => {
                let d = delta_universal(p);
                if d.num_terms() > g.term_budget {
                    return Err(CliError::Resource(format!(
                        "Δ_{p} has {} terms, over the term budget {}",
                        d.num_terms(),
                        g.term_budget
                    )));
                }
                d.to_text()
            }
        };
        let _ = writeln!(text, "Δ_{p} = {value}");
        rows.push(json!({"p": p, "delta": value}));
    }
    let json = if range.start() == range.end() {
        rows.pop().expect("one row")
    } else {
        json!({ "obstructions": rows })
    };
    Ok(Report::new(json, text))
}

fn aim(l0: &str, r0: &str, p: usize, only: bool, g: &GlobalOpts) -> Result<Report, CliError> {
    if p > g.max_p {
        return Err(CliError::Resource(format!("p = {p} exceeds max-p = {}", g.max_p)));
    }
    let (l0, r0) = (poly(l0, "l0")?, poly(r0, "r0")?);
    let s = aim_iterate_budgeted(&l0, &r0, p, g.term_budget)?;
    let delta = s.obstruction();
    let stabilized = delta.is_zero() && !s.l.is_zero();
    let mut json = json!({"p": p, "delta_p": delta.to_string(), "stabilized": stabilized});
    let mut text = format!("delta_{p} = {delta}\nstabilized = {stabilized}");
    if !only {
        json["l_p"] = json!(s.l.to_string());
        json["r_p"] = json!(s.r.to_string());
        text = format!("l_{p} = {}\nr_{p} = {}\n{text}", s.l, s.r);
    }
    Ok(Report::new(json, text))
}

fn solution_json<C: Ring>(s: &LiouvillianSolution<C>) -> Value {
    json!({
        "sign": s.sign.to_string(),
        "P": s.p.to_string(),
        "y1": s.y1(),
        "y2": s.y2(),
        "verified": s.verify(),
    })
}

fn verdict_json(v: &Verdict) -> (Value, Option<String>) {
    match v {
        Verdict::Solvable => (json!("solvable"), None),
        Verdict::Sl2 { reason } => (json!("sl2"), Some(reason.clone())),
    }
}

/// Brings `R` to monic form; odd degrees pass through for the verdict.
fn monic_form(r: &QPoly, scale: Option<&str>) -> Result<(QPoly, Option<Rational>), CliError> {
    if r.degree().finite().unwrap_or(0) % 2 == 1 || r.is_monic() && scale.is_none() {
        return Ok((r.clone(), None));
    }
    let k = scale.map(|s| rational(s, "scale")).transpose()?;
    match monic_rescale(r, k.as_ref(), false)? {
        Rescaled::Exact { m, scale } => Ok((m, Some(scale))),
        Rescaled::Numeric { .. } => Err(ReduceError::IrrationalRescale.into()),
    }
}

fn solve(m: &str, scale: Option<&str>, g: &GlobalOpts) -> Result<Report, CliError> {
    let (m, k) = monic_form(&poly(m, "M")?, scale)?;
    let report = kovacic_solve(&m, g.max_d)?;
    let (verdict, reason) = verdict_json(&report.verdict);
    let mut text = format!("verdict: {}", verdict.as_str().unwrap_or_default());
    if let Some(r) = &reason {
        let _ = write!(text, " ({r})");
    }
    let candidates: Vec<Value> = report
        .candidates
        .iter()
        .map(|c| {
            let sols: Vec<Value> = c.solutions.iter().map(solution_json).collect();
            for s in &c.solutions {
                let _ = write!(text, "\nsign {}, d = {}: P = {}\n  y1 = {}", c.sign, c.d, s.p, s.y1());
            }
            json!({
                "sign": c.sign.to_string(),
                "d": c.d,
                "P_d": c.solutions.first().map(|s| s.p.to_string()),
                "solutions": sols,
                "degenerate": c.degenerate.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut json = json!({
        "verdict": verdict,
        "M": m.to_string(),
        "candidates": candidates,
    });
    if let Some(dec) = &report.decomposition {
        json["b_{n-1}"] = json!(rational_text(&dec.b_top()));
        json["A"] = json!(dec.a.to_string());
        json["B"] = json!(dec.b.to_string());
    }
    if let Some(r) = reason {
        json["reason"] = json!(r);
    }
    if let Some(k) = k {
        json["scale"] = json!(rational_text(&k));
    }
    Ok(Report::new(json, text))
}

fn canonical(n: usize, d: usize, sign: Sign) -> Result<Report, CliError> {
    if n == 0 {
        return Err(usage("n must be at least 1"));
    }
    let integrable = canonical_integrability(n, d);
    let mut json = json!({"n": n, "d": d, "sign": sign.to_string(), "integrable": integrable});
    let mut text = format!("n = {n}, d = {d}, sign {sign}: integrable = {integrable}");
    if integrable {
        let s = canonical_solution(n, d, sign)?;
        json["P"] = json!(s.p.to_string());
        json["solution"] = json!(s.y1());
        json["sparse"] = json!(has_canonical_sparsity(&s.p, n, d));
        json["verified"] = json!(s.verify());
        let _ = write!(text, "\nP = {}\ny1 = {}", s.p, s.y1());
    }
    Ok(Report::new(json, text))
}

fn ideal_json(ideal: &SpectralIdeal) -> Value {
    json!({
        "n": ideal.n,
        "d": ideal.d,
        "sign": ideal.sign.to_string(),
        "depressed": ideal.depressed,
        "vars": ideal.vars.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "linear_condition": ideal.linear_condition(),
        "generators": ideal.generators.iter().map(|g| g.to_text()).collect::<Vec<_>>(),
    })
}

fn variety(
    n: usize,
    range: std::ops::RangeInclusive<usize>,
    sign: Sign,
    depress: bool,
    g: &GlobalOpts,
) -> Result<Report, CliError> {
    if *range.end() > g.max_d {
        return Err(CliError::Resource(format!("d = {} exceeds max-d = {}", range.end(), g.max_d)));
    }
    let mut rows = Vec::new();
    let mut text = String::new();
    for d in range.clone() {
        let ideal = spectral_ideal(n, d, sign, depress, g.term_budget)?;
        let _ = writeln!(text, "n = {n}, d = {d}, sign {sign}: {}", ideal.linear_condition());
        for gen in &ideal.generators {
            let _ = writeln!(text, "  {}", gen.to_text());
        }
        rows.push(ideal_json(&ideal));
    }
    let json = if range.start() == range.end() {
        rows.pop().expect("one row")
    } else {
        json!({ "varieties": rows })
    };
    Ok(Report::new(json, text))
}

fn problem(u: &str, scale: Option<&str>) -> Result<PotentialProblem, CliError> {
    let k = scale.map(|s| rational(s, "scale")).transpose()?;
    Ok(PotentialProblem::new(&poly(u, "U")?, k.as_ref())?)
}

fn spectrum(u: &str, scale: Option<&str>, g: &GlobalOpts) -> Result<Report, CliError> {
    let pb = problem(u, scale)?;
    let scale_text = rational_text(&pb.scale);
    match arithmetic_condition_potential(&pb) {
        Analysis::NotCandidate { reason } => {
            return Ok(Report::new(
                json!({"n": pb.n, "verdict": "not quasi-exactly solvable", "reason": reason, "scale": scale_text}),
                format!("not quasi-exactly solvable: {reason}"),
            ))
        }
        Analysis::ExactlySolvable { offset, spacing } => {
            let step = if spacing == Rational::from_integer(1.into()) {
                String::new()
            } else {
                format!("{}*", rational_text(&spacing))
            };
            let formula = |s: &str| format!("lam = {} {s} {step}(2d+1)", rational_text(&offset));
            return Ok(Report::new(
                json!({
                    "n": 1,
                    "verdict": "exactly solvable",
                    "levels": {"-": formula("+"), "+": formula("-")},
                    "scale": scale_text,
                }),
                format!("exactly solvable: {} (sign -), {} (sign +)", formula("+"), formula("-")),
            ));
        }
        Analysis::Candidate { .. } => {}
    }
    let sp = eigenvalues(&pb, g.tol, g.term_budget)?;
    let d = sp.polynomial.d;
    let mut text = format!(
        "n = {}, d = {d}, sign {}\nspectral polynomial: {}\n",
        pb.n, sp.polynomial.sign, sp.polynomial.poly
    );
    let levels: Vec<Value> = sp
        .levels
        .iter()
        .map(|l| {
            let mut v = json!({"approx": l.value.re, "multiplicity": l.multiplicity});
            if l.value.im != 0.0 {
                v["approx_im"] = json!(l.value.im);
            }
            if let Some(e) = &l.exact {
                v["exact"] = json!(e.to_string());
            }
            let approx = if l.value.im == 0.0 {
                l.value.re.to_string()
            } else {
                l.value.to_string()
            };
            let shown = match &l.exact {
                Some(e) => format!("{e} ≈ {approx}"),
                None => approx,
            };
            let _ = writeln!(text, "  lam = {shown} (multiplicity {})", l.multiplicity);
            v
        })
        .collect();
    Ok(Report::new(
        json!({
            "n": pb.n,
            "d": d,
            "sign": sp.polynomial.sign.to_string(),
            "bound": d + 1,
            "spectral_polynomial": sp.polynomial.poly.to_string(),
            "eigenvalues": levels,
            "converged": sp.converged,
            "within_bound": sp.within_bound,
            "scale": scale_text,
        }),
        text,
    ))
}

fn eigen_solve(u: &str, lambda: &str, scale: Option<&str>, g: &GlobalOpts) -> Result<Report, CliError> {
    let pb = problem(u, scale)?;
    let lam = QuadSurd::parse(lambda)
        .ok_or_else(|| usage(format!("--lambda: expected a rational or r + c*sqrt(D), got {lambda}")))?;
    let r = solve_at_energy(&pb, &lam, g.max_d)?;
    let (verdict, reason) = verdict_json(&r.verdict);
    let mut text = format!("lambda = {lam}: {}", verdict.as_str().unwrap_or_default());
    for s in &r.solutions {
        let _ = write!(text, "\nsign {}: P = {}\n  y1 = {}", s.sign, s.p, s.y1());
    }
    let mut json = json!({
        "lambda": lam.to_string(),
        "verdict": verdict,
        "solutions": r.solutions.iter().map(solution_json).collect::<Vec<_>>(),
        "scale": rational_text(&pb.scale),
    });
    if let Some(reason) = reason {
        json["reason"] = json!(reason);
    }
    Ok(Report::new(json, text))
}

use num_bigint::BigInt;
use serde_json::{json, Value};

use quadsemi::diophantine::{self, LemmaEntry, LemmaVerdict, Obstruction, Quad};
use quadsemi::dynamics::{adjusted_critical_orbit, scan_words, stability_certificate, SequenceSampler};
use quadsemi::exceptional::{
    certify_no_square_images, construct_irreducible_prefix, is_exceptional_pair, scan_pairs, ClosedForm,
    ExceptionalVerdict, PrefixShape, SquareImageCertificate,
};
use quadsemi::heights::{compute_iterate_bound, integral_points_on_phi2};
use quadsemi::{Error, GeneratorSet, Portrait, QuadraticMap, StabilityStatus, StabilityVerdict, Word};

use crate::report::{int, ints, Report, Status};
use crate::Command;

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        // a contradicted theorem is a finding, everything else is bad input
        let code = if matches!(e, Error::TheoremViolation(_)) { 1 } else { 2 };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type Outcome = Result<Report, Failure>;

pub fn run(command: Command, verbose: bool) -> Outcome {
    match command {
        Command::Orbit { gens, word } => orbit(&gens.c, &word),
        Command::ScanWords { gens, length, budget } => scan(&gens.c, length, budget, verbose),
        Command::Portrait { c } => portrait(&c),
        Command::Exceptional { c1, c2 } => exceptional(&c1, &c2),
        Command::ScanPairs { min, max } => pairs(min, max),
        Command::ConstructPrefix { gens } => prefix(&gens.c),
        Command::VerifyLemma { id, all: _, bound } => verify(id.as_deref(), bound, verbose),
        Command::Obstruction { id, modulus } => obstruction(&id, modulus),
        Command::CurvePoints { coeffs, bound } => curve(&coeffs, bound),
        Command::Heights { c, iterations, search_box } => heights(&c, iterations, &search_box),
        Command::McStability { gens, length, trials, seed, weights } => mc(&gens.c, length, trials, seed, weights),
        Command::CrossValidate { gens, length, cap } => cross(&gens.c, length, cap),
    }
}

fn generator_set(cs: &[BigInt]) -> Result<GeneratorSet, Failure> {
    Ok(GeneratorSet::new(cs.iter().cloned())?)
}

fn describe_set(set: &GeneratorSet) -> String {
    let maps: Vec<String> = set.maps().iter().map(|m| m.to_string()).collect();
    format!("{{{}}}", maps.join(", "))
}

fn status_name(s: StabilityStatus) -> &'static str {
    match s {
        StabilityStatus::CertifiedIrreducible => "CertifiedIrreducible",
        StabilityStatus::Unknown => "Unknown",
    }
}

fn verdict_json(v: &StabilityVerdict) -> Value {
    json!({
        "status": status_name(v.status),
        "first_square_index": v.first_square_index,
        "witness_root": v.witness_root.as_ref().map(int),
    })
}

fn orbit(cs: &[BigInt], word: &[usize]) -> Outcome {
    let set = generator_set(cs)?;
    if word.contains(&0) {
        return Err(usage("word indices are 1-based"));
    }
    let w = Word::new(word.iter().map(|i| i - 1).collect(), &set)?;
    let orbit = adjusted_critical_orbit(&set, &w);
    let v = stability_certificate(&set, &w);
    let mut r = Report::new("orbit", json!({ "c": ints(cs), "word": w.display_indices() }));
    r.verdicts = verdict_json(&v);
    r.witnesses = json!({ "orbit": ints(&orbit.entries) });
    r.line(format!("word {w} over {}", describe_set(&set)));
    let entries: Vec<String> = orbit.entries.iter().map(|e| e.to_string()).collect();
    r.line(format!("adjusted critical orbit: {}", entries.join(", ")));
    match (v.first_square_index, &v.witness_root) {
        (Some(k), Some(root)) => r.line(format!("verdict: Unknown (entry {k} is {root}^2)")),
        _ => r.line("verdict: CertifiedIrreducible"),
    }
    Ok(r)
}

fn scan(cs: &[BigInt], length: usize, budget: u128, verbose: bool) -> Outcome {
    let set = generator_set(cs)?;
    if length == 0 {
        return Err(usage("-L must be at least 1"));
    }
    let results = scan_words(&set, length, budget)?;
    let certified: Vec<&Word> = results.iter().filter(|(_, v)| v.is_certified()).map(|(w, _)| w).collect();
    let mut r = Report::new("scan-words", json!({ "c": ints(cs), "max_length": length }));
    r.verdicts = json!({
        "words": results.len(),
        "certified": certified.len(),
        "unknown": results.len() - certified.len(),
    });
    r.witnesses = json!({ "certified_words": certified.iter().map(|w| w.display_indices()).collect::<Vec<_>>() });
    r.line(format!("{} words of length 1..={length} over {}", results.len(), describe_set(&set)));
    r.line(format!("certified irreducible: {}, unknown: {}", certified.len(), results.len() - certified.len()));
    let shown = if verbose { certified.len() } else { certified.len().min(20) };
    for w in &certified[..shown] {
        r.line(format!("  {w}"));
    }
    if shown < certified.len() {
        r.line(format!("  ... {} more (use --verbose)", certified.len() - shown));
    }
    Ok(r)
}

fn portrait(c: &BigInt) -> Outcome {
    let p = Portrait::compute(c);
    let cycles: Vec<Value> = p.two_cycles.iter().map(|(a, b)| json!([int(a), int(b)])).collect();
    let form = p.square_form.as_ref().map(|f| json!({ "kind": format!("{:?}", f.kind), "s": int(&f.s) }));
    let square = p.square_periodic_point();
    let mut r = Report::new("portrait", json!({ "c": int(c) }));
    r.verdicts = json!({
        "fixed_points": ints(&p.fixed_points),
        "two_cycles": cycles,
        "preperiodic": ints(&p.preper),
        "square_form": form,
    });
    r.witnesses = json!({ "square_periodic_point": square.as_ref().map(int) });
    r.line(format!("map {}", QuadraticMap::new(c.clone())));
    r.line(format!("fixed points: {}", join(&p.fixed_points)));
    let cyc: Vec<String> = p.two_cycles.iter().map(|(a, b)| format!("({a} {b})")).collect();
    r.line(format!("2-cycles: {}", if cyc.is_empty() { "none".into() } else { cyc.join(", ") }));
    r.line(format!("preperiodic points: {}", join(&p.preper)));
    if let Some(f) = &p.square_form {
        r.line(format!("square form: {:?} with s = {}", f.kind, f.s));
    }
    if let Some(sq) = &square {
        r.line(format!("square periodic point: {sq}"));
    }
    Ok(r)
}

fn join<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> String {
    let v: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    if v.is_empty() {
        "none".into()
    } else {
        v.join(", ")
    }
}

fn closed_form_json(cf: &Option<ClosedForm>) -> Value {
    match cf {
        None => Value::Null,
        Some(ClosedForm::PairMinus1Minus3) => json!({ "kind": "Pair_minus1_minus3" }),
        Some(ClosedForm::Family(s)) => json!({ "kind": "Family", "s": int(s) }),
    }
}

fn certificate_json(cert: &SquareImageCertificate) -> Value {
    match cert {
        SquareImageCertificate::Certified { n, reason, rigor } => {
            json!({ "kind": "Certified", "n": n, "reason": reason.to_string(), "rigor": format!("{rigor:?}") })
        }
        SquareImageCertificate::Refuted { n, b, value } => {
            json!({ "kind": "Refuted", "n": n, "b": int(b), "value": int(value) })
        }
        SquareImageCertificate::Inapplicable(why) => json!({ "kind": "Inapplicable", "reason": why }),
    }
}

fn describe_certificate(cert: &SquareImageCertificate) -> String {
    match cert {
        SquareImageCertificate::Certified { n, reason, .. } => {
            format!("certified with N = {n} ({reason}; minimum height box-searched)")
        }
        SquareImageCertificate::Refuted { n, b, value } => format!("refuted: b = {b} gives square {value} at N = {n}"),
        SquareImageCertificate::Inapplicable(why) => format!("inapplicable: {why}"),
    }
}

fn cond2_json(v: &ExceptionalVerdict) -> Value {
    let w: Vec<Value> = v
        .cond2_witnesses
        .iter()
        .map(|w| w.as_ref().map_or(Value::Null, |w| json!({ "b": int(&w.b), "image": int(&w.image) })))
        .collect();
    Value::Array(w)
}

fn exceptional(c1: &BigInt, c2: &BigInt) -> Outcome {
    let v = is_exceptional_pair(c1, c2)?;
    let forward = certify_no_square_images(c1, c2)?;
    let backward = certify_no_square_images(c2, c1)?;
    let mut r = Report::new("exceptional", json!({ "c1": int(c1), "c2": int(c2) }));
    r.verdicts = json!({
        "is_exceptional": v.is_exceptional,
        "closed_form": closed_form_json(&v.closed_form),
        "square_images": { "phi1_after_phi2": certificate_json(&forward), "phi2_after_phi1": certificate_json(&backward) },
    });
    r.witnesses = json!({
        "cond1": v.cond1_witnesses.iter().map(|w| w.as_ref().map(int)).collect::<Vec<_>>(),
        "cond2": cond2_json(&v),
    });
    let label = if v.is_exceptional { "exceptional" } else { "not exceptional" };
    r.line(format!("pair ({}, {}): {label}", QuadraticMap::new(c1.clone()), QuadraticMap::new(c2.clone())));
    if let Some(cf) = &v.closed_form {
        r.line(format!("closed form: {cf}"));
    }
    for (k, w) in v.cond1_witnesses.iter().enumerate() {
        match w {
            Some(p) => r.line(format!("phi{} square periodic point: {p}", k + 1)),
            None => r.line(format!("phi{} has no square periodic point", k + 1)),
        }
    }
    for (k, w) in v.cond2_witnesses.iter().enumerate() {
        if let Some(w) = w {
            r.line(format!("phi{}({}) = {} is preperiodic for phi{}", k + 1, w.b, w.image, 2 - k));
        }
    }
    r.line(format!("phi1^N(phi2(b)) square-free: {}", describe_certificate(&forward)));
    r.line(format!("phi2^N(phi1(b)) square-free: {}", describe_certificate(&backward)));
    Ok(r)
}

fn pairs(min: i64, max: i64) -> Outcome {
    let found = scan_pairs(min, max)?;
    let mut r = Report::new("scan-pairs", json!({ "min": min, "max": max }));
    let list: Vec<Value> = found
        .iter()
        .map(|v| json!({ "c1": int(&v.c[0]), "c2": int(&v.c[1]), "closed_form": closed_form_json(&v.closed_form) }))
        .collect();
    let consistent = found.iter().all(|v| v.closed_form.is_some());
    r.verdicts = json!({ "exceptional_pairs": found.len(), "all_have_closed_form": consistent });
    r.witnesses = json!({ "pairs": list });
    r.line(format!("{} ordered exceptional pairs in [{min}, {max}]", found.len()));
    for v in &found {
        let cf = v.closed_form.as_ref().map_or("no closed form".to_string(), |c| c.to_string());
        r.line(format!("  ({}, {})  {cf}", v.c[0], v.c[1]));
    }
    if !consistent {
        r.status = Status::Refuted;
        r.line("found an exceptional pair outside the known families");
    }
    Ok(r)
}

fn prefix(cs: &[BigInt]) -> Outcome {
    let set = generator_set(cs)?;
    let recipe = construct_irreducible_prefix(&set)?;
    let shape = match recipe.shape {
        PrefixShape::TwoLetter => "TwoLetter",
        PrefixShape::ThreeLetter => "ThreeLetter",
    };
    let prefix: Vec<usize> = recipe.prefix_indices().iter().map(|i| i + 1).collect();
    let mut r = Report::new("construct-prefix", json!({ "c": ints(cs) }));
    r.verdicts = json!({ "i": recipe.i + 1, "j": recipe.j + 1, "n": recipe.n, "shape": shape });
    r.witnesses = json!({ "prefix_word": prefix, "certificate": recipe.certificate });
    let (ci, cj) = (set.get(recipe.i), set.get(recipe.j));
    let form = match recipe.shape {
        PrefixShape::TwoLetter => format!("phi_i^{} o phi_j", recipe.n),
        PrefixShape::ThreeLetter => format!("phi_i^{} o phi_j o phi_i", recipe.n),
    };
    r.line(format!("{shape} prefix {form} with phi_i = {ci}, phi_j = {cj}"));
    let p: Vec<String> = prefix.iter().map(|i| i.to_string()).collect();
    r.line(format!("prefix word: [{}]; every extension by a word F is irreducible", p.join(",")));
    r.line(format!("certificate: {}", recipe.certificate));
    Ok(r)
}

fn load_registry() -> Result<Vec<LemmaEntry>, Failure> {
    match std::env::var_os("QUADSEMI_REGISTRY") {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| usage(format!("cannot read registry {}: {e}", path.to_string_lossy())))?;
            Ok(diophantine::parse_registry(&text)?)
        }
        None => Ok(diophantine::registry()?),
    }
}

fn quads(set: &std::collections::BTreeSet<Quad>) -> Value {
    json!(set.iter().collect::<Vec<_>>())
}

fn verify(id: Option<&str>, bound: u32, verbose: bool) -> Outcome {
    let entries = load_registry()?;
    let selected: Vec<&LemmaEntry> = match id {
        Some(id) => vec![diophantine::find_lemma(&entries, id)?],
        None => entries.iter().collect(),
    };
    let mut records = Vec::new();
    let mut r = Report::new("verify-lemma", json!({ "ids": selected.iter().map(|e| &e.id).collect::<Vec<_>>(), "bound": bound }));
    let mut mismatches = 0;
    for e in &selected {
        let verdict = diophantine::verify_lemma(e, bound)?;
        let techniques: Vec<String> = e.techniques.iter().map(|t| t.to_string()).collect();
        let record = match &verdict {
            LemmaVerdict::Match { solutions } => {
                let mut line = format!("{}: Match ({} solutions)", e.id, solutions.len());
                if let Some(note) = e.note() {
                    line.push_str(&format!("; {note}"));
                }
                r.line(line);
                json!({ "id": e.id, "verdict": "Match", "solutions": solutions.len(), "techniques": techniques, "note": e.note() })
            }
            LemmaVerdict::Mismatch { extra, missing } => {
                mismatches += 1;
                r.line(format!("{}: Mismatch ({} extra, {} missing)", e.id, extra.len(), missing.len()));
                if verbose {
                    r.line(format!("  extra: {extra:?}"));
                    r.line(format!("  missing: {missing:?}"));
                }
                json!({ "id": e.id, "verdict": "Mismatch", "extra": quads(extra), "missing": quads(missing), "techniques": techniques })
            }
        };
        records.push(record);
    }
    r.verdicts = json!({ "checked": selected.len(), "matched": selected.len() - mismatches, "records": records });
    if selected.len() == 1 {
        let e = selected[0];
        r.line(format!("system: {}", e.system));
        let claimed: Vec<String> = e.claimed.iter().map(|f| f.to_string()).collect();
        r.line(format!("claimed: {}", if claimed.is_empty() { "no solutions".into() } else { claimed.join(", ") }));
        if let Ok(LemmaVerdict::Match { solutions }) = diophantine::verify_lemma(e, bound) {
            r.witnesses = json!({ "solutions": quads(&solutions) });
        }
    }
    r.line(format!("{}/{} match at bound {bound}", selected.len() - mismatches, selected.len()));
    if mismatches > 0 {
        r.status = Status::Refuted;
    }
    Ok(r)
}

fn obstruction(id: &str, modulus: u64) -> Outcome {
    let entries = load_registry()?;
    let entry = diophantine::find_lemma(&entries, id)?;
    let outcome = diophantine::modular_obstruction(entry, modulus)?;
    let mut r = Report::new("obstruction", json!({ "id": id, "modulus": modulus }));
    match outcome {
        Obstruction::Confirmed { modulus, tested } => {
            r.verdicts = json!({ "obstruction": "Confirmed", "tested": tested });
            r.line(format!("{id}: no solutions mod {modulus} ({tested} residue vectors tested)"));
        }
        Obstruction::Refuted { modulus, witness } => {
            r.verdicts = json!({ "obstruction": "Refuted" });
            r.witnesses = json!({ "residues": witness });
            r.line(format!("{id}: solution mod {modulus} at (x,y,s,t) = {witness:?}"));
            r.status = Status::Refuted;
        }
    }
    Ok(r)
}

fn curve(coeffs: &[i64], bound: u64) -> Outcome {
    let [a4, a2, a0] = coeffs else {
        return Err(usage(format!("--coeffs needs exactly three values a4,a2,a0, got {}", coeffs.len())));
    };
    let pts = diophantine::quartic_curve_points(*a4, *a2, *a0, bound)?;
    let mut r = Report::new("curve-points", json!({ "coeffs": [a4, a2, a0], "bound": bound }));
    r.verdicts = json!({ "points": pts.len() });
    r.witnesses = json!({ "points": pts.iter().map(|(q, y)| json!([q, y])).collect::<Vec<_>>() });
    r.line(format!("y^2 = {a4} q^4 + {a2} q^2 + {a0}, |q| <= {bound}: {} points with y >= 0", pts.len()));
    for (q, y) in &pts {
        r.line(format!("  ({q}, {y})"));
    }
    r.line("desk-scale search; completeness beyond the box is not claimed");
    Ok(r)
}

fn heights(c: &BigInt, iterations: u32, search_box: &BigInt) -> Outcome {
    let phi = QuadraticMap::new(c.clone());
    let bound = compute_iterate_bound(&phi, search_box, iterations)?;
    let points = integral_points_on_phi2(&phi)?;
    let mut r = Report::new("heights", json!({ "c": int(c), "iterations": iterations, "box": int(search_box) }));
    r.verdicts = json!({
        "n": bound.n,
        "b": bound.b,
        "hmin": bound.hmin,
        "rigor": "BoxSearched",
    });
    r.witnesses = json!({
        "hmin_argmin": int(&bound.hmin_argmin),
        "integral_points": points.iter().map(|(x, y)| json!([int(x), int(y)])).collect::<Vec<_>>(),
    });
    r.line(format!("map {phi}, {iterations} iterations"));
    r.line(format!("minimum height {:.12} at a = {} (box-searched)", bound.hmin, bound.hmin_argmin));
    r.line(format!("integral points on y^2 = phi^2(x): {}", points.len()));
    r.line(format!("B = {:.12}, N = {}", bound.b, bound.n));
    Ok(r)
}

fn mc(cs: &[BigInt], length: usize, trials: u64, seed: u64, weights: Option<Vec<f64>>) -> Outcome {
    let set = generator_set(cs)?;
    let sampler = match &weights {
        Some(w) => SequenceSampler::new(w.clone(), seed)?,
        None => SequenceSampler::uniform(set.len(), seed)?,
    };
    let est = quadsemi::dynamics::monte_carlo_stability(&set, &sampler, length, trials)?;
    let mut r = Report::new(
        "mc-stability",
        json!({ "c": ints(cs), "length": length, "trials": trials, "seed": seed, "weights": sampler.weights() }),
    );
    r.verdicts = json!({
        "square_free": est.square_free,
        "estimate": est.estimate,
        "standard_error": est.standard_error,
    });
    r.line(format!("{trials} sampled words of length {length} over {}", describe_set(&set)));
    r.line(format!(
        "square-free fraction {:.6} +- {:.6} ({} of {trials})",
        est.estimate, est.standard_error, est.square_free
    ));
    Ok(r)
}

fn cross(cs: &[BigInt], length: usize, cap: usize) -> Outcome {
    let set = generator_set(cs)?;
    if length == 0 {
        return Err(usage("-L must be at least 1"));
    }
    let rep = quadsemi::oracle::cross_validate(&set, length, cap)?;
    let words = |ws: &[Word]| ws.iter().map(|w| w.display_indices()).collect::<Vec<_>>();
    let mut r = Report::new("cross-validate", json!({ "c": ints(cs), "max_length": length, "cap": cap }));
    r.verdicts = json!({
        "words_checked": rep.words_checked,
        "certified": rep.certified,
        "unknown_irreducible": rep.unknown_irreducible.len(),
        "unknown_reducible": rep.unknown_reducible.len(),
        "forbidden": rep.forbidden.len(),
    });
    r.witnesses = json!({
        "unknown_reducible": words(&rep.unknown_reducible),
        "forbidden": words(&rep.forbidden),
    });
    r.line(format!("{} words over {}", rep.words_checked, describe_set(&set)));
    r.line(format!(
        "certified {}, unknown but irreducible {}, unknown and reducible {}",
        rep.certified,
        rep.unknown_irreducible.len(),
        rep.unknown_reducible.len()
    ));
    if rep.forbidden.is_empty() {
        r.line("no certified word is reducible");
    } else {
        r.status = Status::Refuted;
        for w in &rep.forbidden {
            r.line(format!("certified yet reducible: {w}"));
        }
    }
    Ok(r)
}

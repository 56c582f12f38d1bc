//! JSON certificates and their re-checking from text.

use serde_json::{json, Value as Json};

use super::outline::{check_outline, OutlineError, ProofOutline, Rule, Step};
use super::ProofResult;
use crate::syntax::{parse_formula, Formula};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("certificate verdict is `{0}`, not `valid`")]
    NotValid(String),
    #[error(transparent)]
    Outline(#[from] OutlineError),
}

/// The certificate of a prover run:
/// `{"verdict", "formula", "instances", "disjuncts", "outline", "stats", ...}`.
pub fn certificate_json(formula: &Formula, result: &ProofResult) -> Json {
    let mut out = json!({ "verdict": result.verdict(), "formula": formula.to_string() });
    if let Some(stats) = result.stats() {
        out["stats"] = json!({ "nodes": stats.nodes, "leaves": stats.leaves, "max_level": stats.max_level });
    }
    match result {
        ProofResult::Valid(p) => {
            out["prenex"] = json!(p.prenex.to_string());
            out["herbrand_form"] = json!(p.herbrand.formula.to_string());
            out["instances"] = p
                .instances
                .iter()
                .map(|t| t.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .into();
            out["disjuncts"] = p.disjuncts.iter().map(|d| d.to_string()).collect::<Vec<_>>().into();
            out["outline"] = p
                .outline
                .steps
                .iter()
                .map(|s| json!({ "rule": s.rule.number(), "from": s.from.to_string(), "to": s.to.to_string() }))
                .collect::<Vec<_>>()
                .into();
        }
        ProofResult::Unknown(u) => {
            let c = &u.candidate;
            out["reason"] = json!(u.reason.label());
            out["herbrand_form"] = json!(u.herbrand.formula.to_string());
            out["open_nodes"] = json!(u.open_nodes);
            out["candidate"] = json!({
                "level": c.level,
                "cap": c.cap.to_string(),
                "constraint": c.render_constraint(),
                "atoms": c.atoms.iter().zip(&c.values)
                    .map(|(a, v)| json!({ "atom": a.to_string(), "value": v.to_string() }))
                    .collect::<Vec<_>>(),
                "checked_instances": c.checked_instances,
                "max_instance_value": c.max_instance_value.to_string(),
                "verified": c.verified(),
            });
        }
        ProofResult::CountermodelFound(cm) => {
            out["m"] = json!(cm.m);
            out["value"] = json!(cm.value.to_string());
            out["interpretation"] = cm.interpretation.to_json();
        }
    }
    out
}

fn formula_field(v: &Json, what: &str) -> Result<Formula, CertificateError> {
    let text = v.as_str().ok_or_else(|| CertificateError::Malformed(format!("{what} is not a string")))?;
    parse_formula(text).map_err(|e| CertificateError::Malformed(format!("{what}: {e}")))
}

/// Re-parses a `valid` certificate and checks its outline from scratch.
pub fn check_certificate_json(text: &str) -> Result<(), CertificateError> {
    let cert: Json = serde_json::from_str(text).map_err(|e| CertificateError::Malformed(e.to_string()))?;
    let verdict = cert["verdict"].as_str().unwrap_or_default();
    if verdict != "valid" {
        return Err(CertificateError::NotValid(verdict.to_string()));
    }
    let prenex = formula_field(&cert["prenex"], "prenex")?;
    let disjuncts = cert["disjuncts"]
        .as_array()
        .ok_or_else(|| CertificateError::Malformed("disjuncts missing".into()))?
        .iter()
        .map(|d| formula_field(d, "disjunct"))
        .collect::<Result<Vec<_>, _>>()?;
    let mut steps = Vec::new();
    for s in cert["outline"].as_array().ok_or_else(|| CertificateError::Malformed("outline missing".into()))? {
        let rule = s["rule"]
            .as_u64()
            .and_then(|n| u8::try_from(n).ok())
            .and_then(Rule::from_number)
            .ok_or_else(|| CertificateError::Malformed(format!("bad rule in {s}")))?;
        steps.push(Step { rule, from: formula_field(&s["from"], "from")?, to: formula_field(&s["to"], "to")? });
    }
    let start = match steps.first() {
        Some(s) => s.from.clone(),
        None => Formula::disjunction(disjuncts.iter().cloned()).ok_or(OutlineError::EmptyDisjunction)?,
    };
    check_outline(&ProofOutline { start, steps }, &disjuncts, &prenex)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::{prove_formula, ProverOptions};

    #[test]
    fn valid_certificates_recheck() {
        let f = parse_formula("all x ex y (P(x) -> P(y))").unwrap();
        let result = prove_formula(&f, &ProverOptions::default()).unwrap();
        let cert = certificate_json(&f, &result);
        assert_eq!(cert["verdict"], "valid");
        assert_eq!(cert["outline"][0]["rule"], 5);
        check_certificate_json(&cert.to_string()).unwrap();

        let mut broken = cert.clone();
        broken["outline"][1]["rule"] = json!(5);
        assert!(check_certificate_json(&broken.to_string()).is_err());
    }
}

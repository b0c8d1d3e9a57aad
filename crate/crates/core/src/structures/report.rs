use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use super::{
    anchor_maps, coproduct_on_s, coring_on_p, invariants, morita_products, pairing, pregalois, pregalois_natural, smash_decomposition,
    weak_hopf_groupoid, DepthContext,
};
use crate::algebra::Tower;
use crate::builders::GroupoidComponent;
use crate::depth::{extract_quasibases, is_h_separable, Side};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Morita,
    Anchors,
    Pairing,
    Coring,
    Pregalois,
    Coproduct,
    Smash,
    Invariants,
    Weakhopf,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::Morita,
        Check::Anchors,
        Check::Pairing,
        Check::Coring,
        Check::Pregalois,
        Check::Coproduct,
        Check::Smash,
        Check::Invariants,
        Check::Weakhopf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Morita => "morita",
            Check::Anchors => "anchors",
            Check::Pairing => "pairing",
            Check::Coring => "coring",
            Check::Pregalois => "pregalois",
            Check::Coproduct => "coproduct",
            Check::Smash => "smash",
            Check::Invariants => "invariants",
            Check::Weakhopf => "weakhopf",
        }
    }

    /// Checks that need a tower rather than a groupoid.
    pub fn needs_tower(self) -> bool {
        self != Check::Weakhopf
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Check> {
        Check::ALL.iter().copied().find(|c| c.name() == s.trim()).ok_or_else(|| Error::Precondition(format!("unknown check '{s}'")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub passed: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub cause: Option<Error>,
}

impl CheckResult {
    fn ok(passed: bool, detail: Value) -> CheckResult {
        CheckResult { passed, detail, error: None, cause: None }
    }

    fn err(e: Error) -> CheckResult {
        CheckResult { passed: false, detail: Value::Null, error: Some(e.to_string()), cause: Some(e) }
    }
}

/// Results keyed by check name.
#[derive(Clone, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct StructureReport {
    pub checks: BTreeMap<String, CheckResult>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.checks.values().all(|c| c.passed)
    }

    /// The first error raised by a check, in check order.
    pub fn first_error(&self) -> Option<&Error> {
        Check::ALL.iter().filter_map(|c| self.checks.get(c.name())).find_map(|c| c.cause.as_ref())
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

fn value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report serializes")
}

/// Runs the requested checks on a tower and/or a groupoid. Failed
/// preconditions are recorded per check.
pub fn structure_report(tower: Option<&Tower>, groupoid: Option<&[GroupoidComponent]>, checks: &[Check]) -> Result<StructureReport> {
    let mut report = StructureReport::default();
    let ctx = match tower {
        Some(t) if checks.iter().any(|c| c.needs_tower()) => Some(DepthContext::new(t)?),
        _ => None,
    };
    let rd3_qb = match &ctx {
        Some(c) => match extract_quasibases(&c.tower, Side::Right) {
            Ok(q) => Some(q),
            Err(Error::NotDepth(_)) => None,
            Err(e) => return Err(e),
        },
        None => None,
    };
    for &check in checks {
        let result = match (check, &ctx) {
            (Check::Weakhopf, _) => match groupoid {
                Some(g) => weak_hopf_groupoid(g, ctx.as_ref().map(|c| c.field()).unwrap_or(crate::field::Field::Rational))
                    .map(|r| CheckResult::ok(r.passed(), value(&r))),
                None => Err(Error::Precondition("weakhopf needs a groupoid".into())),
            },
            (_, None) => Err(Error::Precondition(format!("{check} needs a tower"))),
            (_, Some(ctx)) => run(check, ctx, rd3_qb.as_ref()),
        };
        let entry = result.unwrap_or_else(CheckResult::err);
        report.checks.insert(check.name().to_string(), entry);
    }
    Ok(report)
}

fn run(check: Check, ctx: &DepthContext, rd3_qb: Option<&crate::depth::QuasibaseSet>) -> Result<CheckResult> {
    let rd3 = rd3_qb.is_some();
    Ok(match check {
        Check::Morita => {
            let hsep = is_h_separable(&ctx.tower.b, &ctx.tower.c_gens_in_b())?;
            let r = morita_products(ctx, hsep);
            CheckResult::ok(r.passed(), json!({ "h_separable": hsep, "report": value(&r) }))
        }
        Check::Anchors => {
            let hsep = is_h_separable(&ctx.tower.b, &ctx.tower.c_gens_in_b())?;
            let r = anchor_maps(ctx)?;
            let bij = r.bijective();
            CheckResult::ok(r.units && (!hsep || bij), json!({ "h_separable": hsep, "bijective": bij, "report": value(&r) }))
        }
        Check::Pairing => {
            let r = pairing(ctx, rd3_qb)?;
            let ok = if rd3 { r.passed() } else { r.unit };
            CheckResult::ok(ok, json!({ "rd3": rd3, "report": value(&r) }))
        }
        Check::Coring => {
            let qb = rd3_qb.ok_or_else(|| Error::NotDepth("right depth three".into()))?;
            let r = coring_on_p(ctx, qb)?;
            CheckResult::ok(r.passed(), value(&r))
        }
        Check::Pregalois => {
            let natural = pregalois_natural(ctx)?;
            let mut ok = natural.characterizes_rd3() == rd3;
            let mut detail = json!({ "rd3": rd3, "natural": value(&natural) });
            if let Some(qb) = rd3_qb {
                let r = pregalois(ctx, qb)?;
                ok &= r.passed();
                detail["quasibase"] = value(&r);
            }
            CheckResult::ok(ok, detail)
        }
        Check::Coproduct => {
            let r = coproduct_on_s(ctx)?;
            CheckResult::ok(r.passed(), value(&r))
        }
        Check::Smash => {
            let r = smash_decomposition(ctx, None)?;
            CheckResult::ok(r.passed(), value(&r))
        }
        Check::Invariants => {
            let r = invariants(ctx)?;
            CheckResult::ok(r.passed(), value(&r))
        }
        Check::Weakhopf => unreachable!("handled by the caller"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::tower_from_chain;
    use crate::field::Field;
    use crate::groups::{FiniteGroup, Perm, SubgroupChain};

    #[test]
    fn s4_tower_report() {
        let g = FiniteGroup::from_permutations(&[Perm::parse("(1 2 3 4)").unwrap(), Perm::parse("(1 2)").unwrap()], 200).unwrap();
        let a4 = g.subgroup_from_perms(&[Perm::parse("(1 2 3)").unwrap(), Perm::parse("(2 3 4)").unwrap()]).unwrap();
        let v4 = g.subgroup_from_perms(&[Perm::parse("(1 2)(3 4)").unwrap(), Perm::parse("(1 3)(2 4)").unwrap()]).unwrap();
        let t = tower_from_chain(&SubgroupChain::new(&g, a4, v4).unwrap(), Field::Rational);
        let checks: Vec<Check> = Check::ALL.iter().copied().filter(|c| c.needs_tower()).collect();
        let r = structure_report(Some(&t), None, &checks).unwrap();
        for (k, v) in &r.checks {
            assert!(v.passed, "{k}: {v:?}");
        }
        assert_eq!(r.to_json().as_object().unwrap().len(), 8);
    }

    #[test]
    fn unknown_check_is_rejected() {
        assert!("nope".parse::<Check>().is_err());
        assert_eq!("smash".parse::<Check>().unwrap(), Check::Smash);
    }
}

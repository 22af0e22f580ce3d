//! One function per subcommand; each returns an [`ExperimentReport`].

use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use homrep_core::extrep::{hom_action, sl_generators, sp_generators, wedge_action};
use homrep_core::intlattice::{congruence_depth, orbit_span, snf, DEFAULT_PASS_LIMIT};
use homrep_core::nilpotent::{johnson_depth, lcs_depth, tau, HomVector};
use homrep_core::surface::{curve_push_matrix, johnson_class_curve_push, point_push_matrix};
use homrep_core::{
    Automorphism, CoverGraph, Depth, Error, ExtBasis, ExtVector, HomologyModel, IntMatrix, PushDatum, PushKind,
    QuotientSpec, SymplecticForm, Word,
};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::recipe::Recipe;
use crate::report::ExperimentReport;

pub const PASS_LIMIT_ENV: &str = "JS_PASS_LIMIT";

/// Pass limit from `JS_PASS_LIMIT`, else the library default.
pub fn pass_limit_from_env() -> Result<usize> {
    match std::env::var(PASS_LIMIT_ENV) {
        Ok(v) => v.trim().parse().with_context(|| format!("{PASS_LIMIT_ENV} must be a positive integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_PASS_LIMIT),
    }
}

fn timed(f: impl FnOnce() -> Result<ExperimentReport>) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut r = f()?;
    r.duration = start.elapsed();
    Ok(r)
}

fn depth_json(d: Depth) -> Value {
    match d {
        Depth::Exact(k) => json!({ "value": k, "exact": true }),
        Depth::AtLeastCap(k) => json!({ "value": k, "exact": false }),
    }
}

fn spec_json(spec: &QuotientSpec) -> Value {
    serde_json::to_value(spec.to_file()).expect("spec serializes")
}

fn check_rank(spec: &QuotientSpec, rank: Option<usize>) -> Result<usize> {
    match rank {
        Some(n) if n != spec.rank() => bail!("--rank {n} does not match the spec rank {}", spec.rank()),
        _ => Ok(spec.rank()),
    }
}

/// Nonzero `tau` coordinates as `"(i, j^k)": value`.
fn tau_json(t: &HomVector) -> Value {
    let n = t.rank();
    let pairs = ExtBasis::new(n, 2).expect("rank >= 2");
    let mut out = serde_json::Map::new();
    for (idx, c) in t.coords().iter().enumerate() {
        if c != &BigInt::from(0) {
            let (i, p) = (idx / pairs.len() + 1, &pairs.tuples()[idx % pairs.len()]);
            out.insert(format!("({i}, {}^{})", p[0] + 1, p[1] + 1), json!(c.to_string()));
        }
    }
    Value::Object(out)
}

/// Rebuilds `ρ_K(φ)` for `φ = paper_phi(n, e)` and checks it is the identity,
/// together with the nontriviality of `φ` in the Johnson filtration.
pub fn verify_claim1(spec: &QuotientSpec, rank: Option<usize>, exp: u32, cap: usize) -> Result<ExperimentReport> {
    timed(|| {
        let n = check_rank(spec, rank)?;
        if n < 3 {
            bail!("claim needs rank >= 3, got {n}");
        }
        let cover = CoverGraph::build(spec.clone())?;
        for i in [2, 3] {
            let w = Word::generator(n, i)?.power(exp as i64);
            if !cover.member(&w)? {
                bail!("precondition failed: a{i}^{exp} is not in K");
            }
        }
        let phi = Automorphism::paper_phi(n, exp)?;
        let m = cover.rho(&phi)?;
        let depth = johnson_depth(&phi, cap)?;
        let t = tau(&phi)?;

        let mut r = ExperimentReport::new("verify-claim1");
        r.input("spec", spec_json(spec)).input("rank", n).input("exp", exp).input("cap", cap);
        r.output("degree", cover.degree())
            .output("h1_rank", cover.h1_rank())
            .output("rho", m.to_json())
            .output("rho_is_identity", m.is_identity())
            .output("johnson_depth", depth_json(depth))
            .output("tau", tau_json(&t));
        let size = cover.h1_rank();
        r.verdict("rho_is_identity", m.is_identity(), format!("{size}x{size} identity expected"));
        let nontrivial = depth.exact().is_some() && !t.is_zero();
        r.verdict("phi_nontrivial", nontrivial, format!("johnson depth {depth}, tau nonzero: {}", !t.is_zero()));
        Ok(r)
    })
}

pub enum DepthInput {
    Word(String),
    Recipe(String),
}

pub fn johnson_depth_cmd(
    input: &DepthInput,
    rank: usize,
    cap: usize,
    expect: Option<usize>,
) -> Result<ExperimentReport> {
    timed(|| {
        let mut r = ExperimentReport::new("johnson-depth");
        r.input("rank", rank).input("cap", cap);
        let depth = match input {
            DepthInput::Word(text) => {
                let w = Word::parse(rank, text)?;
                r.input("word", w.to_string());
                let d = lcs_depth(&w, cap)?;
                r.output("lcs_depth", depth_json(d));
                d
            }
            DepthInput::Recipe(text) => {
                let recipe = Recipe::parse(text)?;
                r.input("recipe", recipe.to_string());
                let f = recipe.build(rank)?;
                let d = johnson_depth(&f, cap)?;
                r.output("johnson_depth", depth_json(d));
                match tau(&f) {
                    Ok(t) => r.output("tau", tau_json(&t)),
                    Err(Error::NotTorelli) => r.output("tau", "not in the Torelli subgroup"),
                    Err(e) => return Err(e.into()),
                };
                d
            }
        };
        if let Some(k) = expect {
            r.input("expect", k);
            r.verdict("depth_matches", depth == Depth::Exact(k), format!("expected {k}, found {depth}"));
        }
        Ok(r)
    })
}

pub fn rho_cmd(spec: &QuotientSpec, rank: Option<usize>, recipe: &str, expect_identity: bool) -> Result<ExperimentReport> {
    timed(|| {
        let n = check_rank(spec, rank)?;
        let recipe = Recipe::parse(recipe)?;
        let f = recipe.build(n)?;
        let cover = CoverGraph::build(spec.clone())?;
        let m = cover.rho(&f)?;
        let mut r = ExperimentReport::new("rho");
        r.input("spec", spec_json(spec)).input("recipe", recipe.to_string());
        r.output("h1_rank", cover.h1_rank())
            .output("rho", m.to_json())
            .output("determinant", m.determinant()?.to_string())
            .output("is_identity", m.is_identity());
        if expect_identity {
            r.verdict("rho_is_identity", m.is_identity(), "identity expected");
        }
        Ok(r)
    })
}

pub fn deck_cmd(spec: &QuotientSpec, rank: Option<usize>, recipe: Option<&str>) -> Result<ExperimentReport> {
    timed(|| {
        let n = check_rank(spec, rank)?;
        let cover = CoverGraph::build(spec.clone())?;
        let deck = cover.deck_matrices()?;
        let mut r = ExperimentReport::new("deck");
        r.input("spec", spec_json(spec));
        r.output("order", deck.len())
            .output("h1_rank", cover.h1_rank())
            .output("deck", Value::Array(deck.iter().map(IntMatrix::to_json).collect()));
        if let Some(text) = recipe {
            let recipe = Recipe::parse(text)?;
            r.input("recipe", recipe.to_string());
            let m = cover.rho(&recipe.build(n)?)?;
            let ok = cover.normalizes_deck(&m)?;
            r.output("normalizes_deck", ok);
            r.verdict("normalizes_deck", ok, "rho(f) D rho(f)^-1 = D expected");
        }
        Ok(r)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Sl,
    Sp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleKind {
    Wedge3,
    Hom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedSource {
    Coords(Vec<i64>),
    /// Johnson class `Σ_{i<=j} e_i ∧ f_i ∧ c` of a curve push.
    Johnson { j: usize, c: Vec<i64> },
}

pub fn orbit_index(
    group: GroupKind,
    module: ModuleKind,
    rank: usize,
    seed: &SeedSource,
    pass_limit: usize,
) -> Result<ExperimentReport> {
    timed(|| {
        let gens = match group {
            GroupKind::Sl => sl_generators(rank)?,
            GroupKind::Sp => sp_generators(SymplecticForm::for_rank(rank)?.genus())?,
        };
        let actions: Vec<IntMatrix> = gens
            .iter()
            .map(|g| match module {
                ModuleKind::Wedge3 => wedge_action(g, 3),
                ModuleKind::Hom => hom_action(g),
            })
            .collect::<homrep_core::Result<_>>()?;
        let dim = actions[0].rows();
        let (coords, rendered) = match seed {
            SeedSource::Coords(xs) => {
                if xs.len() != dim {
                    bail!("seed has {} coordinates, module has dimension {dim}", xs.len());
                }
                (xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>(), None)
            }
            SeedSource::Johnson { j, c } => {
                if group != GroupKind::Sp || module != ModuleKind::Wedge3 {
                    bail!("Johnson class seeds live in the wedge3 module of sp");
                }
                let form = SymplecticForm::for_rank(rank)?;
                let c: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
                let v: ExtVector = johnson_class_curve_push(form.genus(), *j, &c)?;
                let text = v.render(Some(form.genus()));
                (v.into_coords(), Some(text))
            }
        };
        let mut r = ExperimentReport::new("orbit-index");
        r.input("group", match group {
            GroupKind::Sl => "sl",
            GroupKind::Sp => "sp",
        })
        .input("module", match module {
            ModuleKind::Wedge3 => "wedge3",
            ModuleKind::Hom => "hom",
        })
        .input("rank", rank)
        .input("pass_limit", pass_limit)
        .input("seed", Value::Array(coords.iter().map(|x| json!(x.to_string())).collect()));
        if let Some(text) = rendered {
            r.input("seed_class", text);
        }
        r.output("module_dimension", dim).output("generators", actions.len());
        match orbit_span(&coords, &actions, pass_limit) {
            Ok(l) => {
                let index = l.index();
                r.output("rank", l.rank())
                    .output("index", index.to_json())
                    .output("snf_diagonal", Value::Array(l.snf_diagonal().iter().map(|x| json!(x.to_string())).collect()));
                r.verdict("finite_index", index.is_finite(), format!("rank {} of {dim}, index {index}", l.rank()));
            }
            Err(Error::PassLimit { passes, rank }) => {
                r.output("rank_at_stop", rank);
                r.inconclusive(format!("saturation did not finish within {passes} passes"));
            }
            Err(e) => return Err(e.into()),
        }
        Ok(r)
    })
}

pub fn congruence_scan(
    spec: &QuotientSpec,
    rank: Option<usize>,
    prime: u64,
    cap: usize,
    recipes: &[String],
    min_depth: Option<usize>,
) -> Result<ExperimentReport> {
    timed(|| {
        let n = check_rank(spec, rank)?;
        if recipes.is_empty() {
            bail!("congruence scan needs at least one recipe");
        }
        let cover = CoverGraph::build(spec.clone())?;
        let mut r = ExperimentReport::new("congruence-scan");
        r.input("spec", spec_json(spec)).input("prime", prime).input("cap", cap);
        let mut rows = Vec::with_capacity(recipes.len());
        for (idx, text) in recipes.iter().enumerate() {
            let recipe = Recipe::parse(text)?;
            let f = recipe.build(n)?;
            let m = cover.rho(&f)?;
            let depth = congruence_depth(&m, prime, cap)?;
            rows.push(json!({
                "recipe": recipe.to_string(),
                "depth": depth,
                "at_cap": depth == cap,
                "rho_is_identity": m.is_identity(),
            }));
            if let Some(k) = min_depth {
                r.verdict(
                    &format!("element_{idx:03}"),
                    depth >= k,
                    format!("{recipe}: depth {depth}, need >= {k}"),
                );
            }
        }
        if let Some(k) = min_depth {
            r.input("min_depth", k);
        }
        r.input("recipes", recipes.to_vec());
        r.output("elements", rows);
        Ok(r)
    })
}

/// Homology model from JSON: `{"genus": g, "punctures": k}` or
/// `{"pairing": [[...], ...]}`.
pub fn model_from_json(text: &str) -> Result<HomologyModel> {
    let v: Value = serde_json::from_str(text).context("model file")?;
    if let Some(p) = v.get("pairing") {
        return Ok(HomologyModel::new(IntMatrix::from_json(p)?)?);
    }
    let genus = v
        .get("genus")
        .and_then(Value::as_u64)
        .ok_or_else(|| anyhow!("model needs `genus` or `pairing`"))? as usize;
    let punctures = v.get("punctures").and_then(Value::as_u64).unwrap_or(0) as usize;
    Ok(HomologyModel::with_punctures(genus, punctures)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PushExpectation {
    Identity,
    Unipotent,
}

pub fn push_act(model: &HomologyModel, data: &[PushDatum], expect: Option<PushExpectation>) -> Result<ExperimentReport> {
    timed(|| {
        let kind = data.first().map(|d| d.kind).ok_or_else(|| anyhow!("push data is empty"))?;
        let m = match kind {
            PushKind::Point => point_push_matrix(model, data)?,
            PushKind::Curve => curve_push_matrix(model, data)?,
        };
        let n = m.sub(&IntMatrix::identity(m.rows()))?;
        let unipotent = n.mul(&n)?.is_zero();
        let preserves = model.preserves(&m)?;
        let mut r = ExperimentReport::new("push-act");
        r.input("pairing", model.pairing().to_json())
            .input("data", serde_json::to_value(data)?);
        r.output("kind", if kind == PushKind::Point { "point" } else { "curve" })
            .output("matrix", m.to_json())
            .output("is_identity", m.is_identity())
            .output("unipotent", unipotent)
            .output("preserves_pairing", preserves);
        if !preserves {
            r.notes.push("the action does not preserve the intersection pairing".into());
        }
        match expect {
            Some(PushExpectation::Identity) => {
                r.verdict("identity", m.is_identity(), "identity expected");
            }
            Some(PushExpectation::Unipotent) => {
                r.verdict("unipotent", unipotent, "(M - I)^2 = 0 expected");
            }
            None => {}
        }
        Ok(r)
    })
}

pub fn snf_cmd(a: &IntMatrix) -> Result<ExperimentReport> {
    timed(|| {
        let s = snf(a);
        let reconstructs = s.u.mul(a)?.mul(&s.v)? == s.d;
        let mut r = ExperimentReport::new("snf");
        r.input("matrix", a.to_json());
        r.output("diagonal", Value::Array(s.diagonal().iter().map(|x| json!(x.to_string())).collect()))
            .output("rank", s.rank())
            .output("u", s.u.to_json())
            .output("v", s.v.to_json())
            .output("d", s.d.to_json());
        r.verdict("reconstructs", reconstructs, "U A V = D");
        Ok(r)
    })
}

//! Quick randomized checks of the identities the library is built on. The
//! integration suites run the same identities against independent oracles;
//! this is the smoke test an installed binary can run on its own.

use std::fmt::Write as _;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use tropmod::intersect::{stable_intersection, stable_intersection_detailed, transversal_intersection};
use tropmod::modify::{modify_curve_stable, pullback_with_frozen};
use tropmod::momentum::{momentum_2d, momentum_3d, momentum_general};
use tropmod::weil::{is_admissible, make_admissible, pushforward_image, weil_difference};
use tropmod::{curve_from_polynomial, random, PlFunction, Rational, TropError};

use crate::commands::Report;
use crate::model::{document_json, parse_document, Document, Item};

type Check = fn(&mut ChaCha8Rng) -> Result<(), String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn err(e: TropError) -> String {
    e.to_string()
}

fn vieta(r: &mut ChaCha8Rng) -> Result<(), String> {
    let f = random::random_univariate(r, -3, 5, 5);
    let roots = f.univariate_roots().map_err(err)?;
    let (lo, hi) = f.extreme_coefficients().map_err(err)?;
    let sum: Rational = roots.roots.iter().map(|&(x, m)| x * Rational::from_integer(m as i128)).sum();
    ensure(sum == lo - hi, || format!("{f}: root sum {sum} but {lo} - {hi}"))
}

fn bezout(r: &mut ChaCha8Rng) -> Result<(), String> {
    let (d1, d2) = (r.gen_range(1..=3), r.gen_range(1..=3));
    let c1 = curve_from_polynomial(&random::random_triangle_polynomial(r, d1, 0.5, false)).map_err(err)?;
    let c2 = curve_from_polynomial(&random::random_triangle_polynomial(r, d2, 0.5, false)).map_err(err)?;
    let s = stable_intersection_detailed(&c1, &c2).map_err(err)?;
    ensure(s.divisor.degree() == d1 * d2 && s.escaping == 0, || {
        format!("degrees {d1}, {d2}: got {} with {} escaping", s.divisor.degree(), s.escaping)
    })
}

fn symmetry(r: &mut ChaCha8Rng) -> Result<(), String> {
    let p = random::random_degenerate_pair(r, 3);
    let ab = stable_intersection(&p.first, &p.second).map_err(err)?;
    let ba = stable_intersection(&p.second, &p.first).map_err(err)?;
    ensure(ab == ba, || format!("{} gives {ab} one way and {ba} the other", p.polynomial))
}

fn generic(r: &mut ChaCha8Rng) -> Result<(), String> {
    let c1 = random::random_plane_curve(r, 3);
    let c2 = random::random_plane_curve(r, 3);
    match transversal_intersection(&c1, &c2) {
        Ok(d) => {
            let s = stable_intersection(&c1, &c2).map_err(err)?;
            ensure(s == d, || format!("stable {s} differs from transversal {d}"))
        }
        Err(TropError::NotTransversal(_)) => Ok(()),
        Err(e) => Err(err(e)),
    }
}

fn modification(r: &mut ChaCha8Rng) -> Result<(), String> {
    let c = random::random_plane_curve(r, 3);
    let d = r.gen_range(1..=2);
    let f = random::random_triangle_polynomial(r, d, 0.5, false);
    match modify_curve_stable(&c, &f) {
        Ok(m) => {
            ensure(m.check_balancing().is_ok(), || format!("lift along {f} is unbalanced"))?;
            ensure(m.projected_support() == c.support(), || format!("lift along {f} does not project back"))?;
            let a = random::random_point(r, 3);
            ensure(momentum_3d(&m, &a).map_err(err)?.is_zero(), || format!("lift along {f} has nonzero momentum"))
        }
        Err(TropError::SelfModification) => {
            ensure(pullback_with_frozen(&c, &f) == Err(TropError::SelfModification), || {
                format!("{f}: lift and pullback disagree on self-modification")
            })
        }
        Err(e) => Err(err(e)),
    }
}

fn momentum(r: &mut ChaCha8Rng) -> Result<(), String> {
    let c = random::random_plane_curve(r, 4);
    let a = random::random_point(r, 2);
    ensure(momentum_2d(&c, &a).map_err(err)?.is_zero(), || "plane curve with nonzero momentum".into())?;
    let img = random::random_t4_image(r, 3).map_err(err)?;
    let a = random::random_point(r, 4);
    ensure(momentum_general(&img, &a).map_err(err)?.is_zero(), || "curve in R^4 with nonzero momentum".into())
}

fn reciprocity(r: &mut ChaCha8Rng) -> Result<(), String> {
    let t = random::random_triple(r);
    let before = weil_difference(&t.graph, &t.f, &t.g).map_err(err)?;
    ensure(before.is_zero(), || format!("difference {before}"))?;
    let adm = make_admissible(&t.graph, &t.f, &t.g).map_err(err)?;
    let tt = &adm.triple;
    ensure(is_admissible(&tt.graph, &tt.f, &tt.g), || "extension is not admissible".into())?;
    let after = weil_difference(&tt.graph, &tt.f, &tt.g).map_err(err)?;
    ensure(after.is_zero(), || format!("difference {after} after extension"))?;
    match pushforward_image(&tt.graph, &tt.f, &tt.g) {
        Ok(image) => ensure(image.check_balancing().is_ok(), || "pushforward is unbalanced".into()),
        Err(TropError::EmptyCurve) => {
            let flat = |h: &PlFunction| h.divisor(&tt.graph).is_empty();
            ensure(flat(&tt.f) && flat(&tt.g), || "empty image of nonconstant functions".into())
        }
        Err(e) => Err(err(e)),
    }
}

fn round_trip(r: &mut ChaCha8Rng) -> Result<(), String> {
    let mut doc = Document::default();
    let d = r.gen_range(1..=3);
    doc.items.insert("poly".into(), Item::Poly(random::random_triangle_polynomial(r, d, 0.6, false)));
    doc.items.insert("C".into(), Item::Curve(random::random_plane_curve(r, 3)));
    let t = random::random_triple(r);
    doc.items.insert("G".into(), Item::Abstract(t.graph.clone()));
    doc.items.insert("f".into(), Item::Func(crate::model::FuncData::of(&t.f, &t.graph)));
    doc.items.insert("point".into(), Item::Point(random::random_point(r, 3)));
    let text = document_json(&doc).to_string();
    let back = parse_document(&text, "selftest").map_err(|e| e.to_string())?;
    ensure(back == doc, || format!("document changed on round trip: {text}"))
}

const CHECKS: [(&str, Check); 8] = [
    ("univariate roots sum", vieta),
    ("Bezout count", bezout),
    ("stable intersection symmetry", symmetry),
    ("stable equals transversal", generic),
    ("modified curves balance", modification),
    ("momentum vanishes", momentum),
    ("Weil reciprocity", reciprocity),
    ("document round trip", round_trip),
];

/// Runs every check on `cases` seeded instances.
pub fn run(cases: usize, seed: u64) -> Report {
    let mut text = String::new();
    let mut results = Vec::new();
    let mut all_ok = true;
    for (k, (name, check)) in CHECKS.iter().enumerate() {
        let mut failure = None;
        for i in 0..cases {
            let case_seed = seed.wrapping_mul(1_000_003).wrapping_add((k * 10_000 + i) as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(case_seed);
            if let Err(why) = check(&mut rng) {
                failure = Some((case_seed, why));
                break;
            }
        }
        match &failure {
            None => {
                let _ = writeln!(text, "ok   {name}: {cases} cases");
            }
            Some((s, why)) => {
                all_ok = false;
                let _ = writeln!(text, "FAIL {name}: case seed {s}: {why}");
            }
        }
        results.push(json!({
            "check": name,
            "cases": cases,
            "ok": failure.is_none(),
            "failure": failure.map(|(s, why)| json!({"seed": s, "detail": why})),
        }));
    }
    Report { text, json: json!({"seed": seed, "checks": results}), ok: all_ok }
}

use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{Run, ScenarioInfo};
use crate::cech::{
    compare_models, curvature, dg_lie_bracket, dglie_membership, flat_connection, flat_moduli, gauge_reduce,
    is_integral, prequantize_torus, r3_corpus, random_cochain, winding_connection, GaugeBand, GaugeOutcome, Nerve,
    SemidirectElement,
};
use crate::conventions::{Conventions, JacobiConvention, SlotOrder};
use crate::error::{Error, Result};
use crate::exterior::random::{random_field, random_form, Band};
use crate::exterior::{parse_form, parse_vector_field, Chart, CoefFn, Form, Mono};
use crate::linfinity::{abelian, string_extension, su2, verify_l_infinity, LieCocycle};
use crate::nplectic::{
    check_pre_nplectic, dw_check, jacobi_report, kernel_complex, l_infty_bracket, solve_hamiltonian, Observable,
};
use crate::Scalar;

pub static SCENARIOS: &[ScenarioInfo] = &[
    ScenarioInfo {
        name: "exterior-identities",
        summary: "d² = 0, graded Leibniz, Cartan, ι² = 0 and [L_v, L_w] = L_[v,w] on random forms",
        defaults: &[("samples", "100"), ("max_dim", "4")],
        run: exterior_identities,
    },
    ScenarioInfo {
        name: "classical-poisson-r2",
        summary: "n = 1 on (R², dx∧dy): binary bracket against f_x g_y − f_y g_x",
        defaults: &[("pairs", "20"), ("points", "10"), ("max_degree", "3")],
        run: classical_poisson,
    },
    ScenarioInfo {
        name: "r3-volume-jacobi",
        summary: "n = 2 on (R³, dx∧dy∧dz): generalized Jacobi up to arity 4",
        defaults: &[
            ("elements", "5"),
            ("max_arity", "4"),
            ("jacobi", "shuffle"),
            ("slots", "last-first"),
        ],
        run: volume_jacobi,
    },
    ScenarioInfo {
        name: "string-su2",
        summary: "string Lie 2-algebra of su(2) from the Killing 3-cocycle",
        defaults: &[("max_arity", "4"), ("jacobi", "shuffle")],
        run: string_su2,
    },
    ScenarioInfo {
        name: "heisenberg-r2",
        summary: "abelian R² extended by the 2-cocycle c(e1, e2)",
        defaults: &[("c", "1"), ("jacobi", "shuffle")],
        run: heisenberg,
    },
    ScenarioInfo {
        name: "torus-prequantization",
        summary: "Deligne cocycle with curvature k dx∧dy on T², period integrality, d_tot² = 0",
        defaults: &[("k", "1"), ("dtot_samples", "12")],
        run: torus_prequantization,
    },
    ScenarioInfo {
        name: "flat-moduli-s1",
        summary: "flat level-1 cocycles on the circle classified by gauge solves and holonomy",
        defaults: &[("samples", "12"), ("poly", "2"), ("wave", "2")],
        run: flat_moduli_s1,
    },
    ScenarioInfo {
        name: "flat-moduli-t2",
        summary: "flat level-1 cocycles on T² labelled by the two holonomies",
        defaults: &[("samples", "5"), ("poly", "1"), ("wave", "1")],
        run: flat_moduli_t2,
    },
    ScenarioInfo {
        name: "dglie-compare-r3",
        summary: "strict dg-Lie model of A = x dy∧dz on R³ against the L∞ bracket",
        defaults: &[],
        run: dglie_compare,
    },
    ScenarioInfo {
        name: "kernel-betti-t2",
        summary: "Betti numbers of the closed-form complex on T² for n = 1, 2",
        defaults: &[("bands", "1,2")],
        run: kernel_t2,
    },
    ScenarioInfo {
        name: "kernel-betti-t3",
        summary: "Betti numbers of the closed-form complex on T³ for n = 2, 3",
        defaults: &[("bands", "1,2")],
        run: kernel_t3,
    },
    ScenarioInfo {
        name: "dw-check-r3",
        summary: "De Donder–Weyl equation dH = ι_{v₁∧⋯∧v_n} ω on volume forms",
        defaults: &[],
        run: dw_r3,
    },
];

fn rng(run: &Run) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(run.seed())
}

fn slots(run: &Run) -> Result<SlotOrder> {
    serde_json::from_value(json!(run.raw("slots"))).map_err(|e| Error::InvalidOverride(format!("slots: {e}")))
}

fn jacobi(run: &Run) -> Result<JacobiConvention> {
    serde_json::from_value(json!(run.raw("jacobi"))).map_err(|e| Error::InvalidOverride(format!("jacobi: {e}")))
}

fn bands(run: &Run) -> Result<Vec<i64>> {
    run.raw("bands")
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidOverride(format!("bands: `{s}`")))
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn exterior_identities(run: &mut Run) -> Result<()> {
    let samples: usize = run.get("samples")?;
    let max_dim: usize = run.get("max_dim")?;
    if !(1..=4).contains(&max_dim) {
        return Err(Error::InvalidOverride("max_dim must be in 1..=4".into()));
    }
    let codes: Vec<&str> = ["r", "t", "rr", "rt", "tt", "rrr", "rtt", "ttt", "rrrr", "rtrt", "tttt"]
        .into_iter()
        .filter(|c| c.len() <= max_dim)
        .collect();
    let band = Band {
        max_poly: 2,
        max_wave: 1,
        max_terms: 2,
    };
    let mut rng = rng(run);
    let names = ["d_squared", "leibniz", "cartan", "interior_squared", "lie_commutator"];
    let mut failures: BTreeMap<&str, usize> = names.iter().map(|n| (*n, 0)).collect();
    let mut per_degree = Vec::new();
    for p in 0..=max_dim {
        let charts: Vec<_> = codes
            .iter()
            .filter(|c| c.len() >= p.max(1))
            .map(|c| Chart::from_code(c))
            .collect::<Result<_>>()?;
        for _ in 0..samples {
            let c = &charts[rng.gen_range(0..charts.len())];
            let a = random_form(&mut rng, c, p, band);
            let q = rng.gen_range(0..=c.dim() - p);
            let b = random_form(&mut rng, c, q, band);
            let v = random_field(&mut rng, c, band);
            let w = random_field(&mut rng, c, band);
            let sign = if p % 2 == 0 { 1 } else { -1 };
            let mut bump = |k: &'static str, ok: bool| {
                if !ok {
                    *failures.get_mut(k).expect("known identity") += 1;
                }
            };
            bump("d_squared", a.d().d().is_zero());
            let leibniz = &a.d().wedge(&b)? + &a.wedge(&b.d())?.scale_int(sign);
            bump("leibniz", a.wedge(&b)?.d() == leibniz);
            let cartan = if p == 0 {
                a.d().interior(&v)?
            } else {
                &a.d().interior(&v)? + &a.interior(&v)?.d()
            };
            bump("cartan", a.lie_derivative(&v)? == cartan);
            if p >= 2 {
                bump("interior_squared", a.interior(&v)?.interior(&v)?.is_zero());
            }
            let lhs = &a.lie_derivative(&w)?.lie_derivative(&v)? - &a.lie_derivative(&v)?.lie_derivative(&w)?;
            bump("lie_commutator", lhs == a.lie_derivative(&v.lie_bracket(&w)?)?);
        }
        per_degree.push(json!({"degree": p, "samples": samples}));
    }
    for n in names {
        run.check(n, failures[n] == 0, json!({"failures": failures[n]}));
    }
    run.record("degrees", json!(per_degree));
    run.record("charts", json!(codes));
    Ok(())
}

fn random_poly(rng: &mut ChaCha8Rng, dim: usize, max_degree: u32) -> CoefFn {
    let mut f = CoefFn::zero(dim);
    while f.is_zero() {
        for _ in 0..4 {
            let mut m = Mono::one(dim);
            let total = rng.gen_range(0..=max_degree);
            for _ in 0..total {
                m.pow[rng.gen_range(0..dim)] += 1;
            }
            f = f.add(&CoefFn::term(
                dim,
                m,
                Scalar::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4)),
            ));
        }
    }
    f
}

fn rational_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<BigRational> {
    (0..dim)
        .map(|_| BigRational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=7).into()))
        .collect()
}

fn classical_poisson(run: &mut Run) -> Result<()> {
    let pairs: usize = run.get("pairs")?;
    let points: usize = run.get("points")?;
    let max_degree: u32 = run.get("max_degree")?;
    let r2 = Chart::euclidean(2);
    let p = check_pre_nplectic(parse_form(&r2, "dx0^dx1")?, 1)?;
    let mut rng = rng(run);
    let mut table = Vec::new();
    let (mut symbolic, mut pointwise) = (true, true);
    let mut observables = Vec::new();
    for _ in 0..pairs {
        let f = random_poly(&mut rng, 2, max_degree);
        let g = random_poly(&mut rng, 2, max_degree);
        let pf = solve_hamiltonian(&p, &Form::function(r2.clone(), f.clone())?)?.pair;
        let pg = solve_hamiltonian(&p, &Form::function(r2.clone(), g.clone())?)?.pair;
        let br = l_infty_bracket(&p, &[Observable::Pair(pf.clone()), Observable::Pair(pg)])?;
        let h = br
            .form_part()
            .and_then(Form::as_function)
            .expect("function-valued bracket");
        let expect = f.deriv(0).mul(&g.deriv(1)).sub(&f.deriv(1).mul(&g.deriv(0)));
        symbolic &= h == expect;
        for _ in 0..points {
            let x = rational_point(&mut rng, 2);
            pointwise &= h.evaluate_exact(&x)? == expect.evaluate_exact(&x)?;
        }
        table.push(json!({"f": f.to_string(), "g": g.to_string(), "bracket": h.to_string()}));
        if observables.len() < 4 {
            observables.push(Observable::Pair(pf));
        }
    }
    run.check("symbolic_agreement", symbolic, json!({"pairs": pairs}));
    run.check("pointwise_agreement", pointwise, json!({"points_per_pair": points}));
    let jac = jacobi_report(&p, &observables, 3, Conventions::default())?;
    run.check("jacobi", jac.all_zero(), jac.to_json());
    run.record("pairs", json!(table));
    Ok(())
}

fn volume_jacobi(run: &mut Run) -> Result<()> {
    let count: usize = run.get("elements")?;
    let max_arity: usize = run.get("max_arity")?;
    let conv = Conventions {
        jacobi: jacobi(run)?,
        slots: slots(run)?,
    };
    let r3 = Chart::euclidean(3);
    let p = check_pre_nplectic(parse_form(&r3, "dx0^dx1^dx2")?, 2)?;
    let mut rng = rng(run);
    let mut elements = Vec::new();
    for i in 0..count {
        if i + 1 == count && count > 1 {
            let f = random_poly(&mut rng, 3, 2);
            elements.push(Observable::form(&p, 1, Form::function(r3.clone(), f)?)?);
            continue;
        }
        let raw = (0..3).map(|j| (vec![j], random_poly(&mut rng, 3, 2))).collect();
        let h = Form::from_terms(r3.clone(), 1, raw)?;
        elements.push(Observable::Pair(solve_hamiltonian(&p, &h)?.pair));
    }
    let report = jacobi_report(&p, &elements, max_arity, conv)?;
    run.check("generalized_jacobi", report.all_zero(), report.to_json());
    let unit: Vec<Observable> = ["-x1*dx2", "-x2*dx0", "-x0*dx1"]
        .iter()
        .map(|s| Ok(Observable::Pair(solve_hamiltonian(&p, &parse_form(&r3, s)?)?.pair)))
        .collect::<Result<_>>()?;
    let ternary = l_infty_bracket(&p, &unit)?;
    run.check(
        "ternary_unit_bracket",
        ternary.form_part() == Some(&parse_form(&r3, "-1")?),
        json!({"value": ternary.to_string()}),
    );
    run.record(
        "elements",
        json!(elements.iter().map(ToString::to_string).collect::<Vec<_>>()),
    );
    Ok(())
}

fn string_su2(run: &mut Run) -> Result<()> {
    let max_arity: usize = run.get("max_arity")?;
    let conv = jacobi(run)?;
    let g = su2();
    let mu = LieCocycle::killing_three_form(&g);
    let s = string_extension(&g, &mu)?;
    let report = verify_l_infinity(&s, max_arity, conv)?;
    run.check("l_infinity", report.all_zero, json!(report));
    let l3 = s.bracket_basis(&[0, 1, 2]);
    run.check(
        "ternary_bracket_is_cocycle",
        l3 == [(3, Scalar::one())].into_iter().collect(),
        json!(format!("{l3:?}")),
    );
    run.record("algebra", s.to_json());
    Ok(())
}

fn heisenberg(run: &mut Run) -> Result<()> {
    let c: BigRational = run.get("c")?;
    let conv = jacobi(run)?;
    let ab = abelian(&["e1", "e2"]);
    let mut mu = LieCocycle::zero(2, 2);
    mu.set(&[0, 1], Scalar::from_rational(c.clone()))?;
    let h = string_extension(&ab, &mu)?;
    let report = verify_l_infinity(&h, 3, conv)?;
    run.check("l_infinity", report.all_zero, json!(report));
    let br = h.bracket_basis(&[0, 1]);
    let expect: BTreeMap<usize, Scalar> = if c == BigRational::from_integer(0.into()) {
        BTreeMap::new()
    } else {
        [(2, Scalar::from_rational(c))].into_iter().collect()
    };
    run.check("central_bracket", br == expect, json!(format!("{br:?}")));
    run.record("algebra", h.to_json());
    Ok(())
}

fn torus_prequantization(run: &mut Run) -> Result<()> {
    let k: BigRational = run.get("k")?;
    let samples: usize = run.get("dtot_samples")?;
    let t2 = Chart::torus(2);
    let omega = Form::from_terms(
        t2.clone(),
        2,
        vec![(vec![0, 1], CoefFn::constant(2, Scalar::from_rational(k.clone())))],
    )?;
    let integrality = is_integral(&omega)?;
    run.check("integral", integrality.integral, json!(integrality));
    if k.is_integer() {
        let c = prequantize_torus(&k.to_integer())?;
        let cocycle = c.is_cocycle()?;
        run.check("is_cocycle", cocycle.is_cocycle, json!(cocycle.residuals));
        let f = curvature(&c)?;
        run.check("curvature", f == omega, json!(f.to_string()));
        run.record("cochain", c.to_json());
    }
    let mut rng = rng(run);
    let nerves = [Nerve::circle(), Nerve::torus(2)?];
    let band = Band {
        max_poly: 1,
        max_wave: 1,
        max_terms: 2,
    };
    let mut bad = 0;
    for i in 0..samples {
        let nerve = &nerves[i % 2];
        let level = rng.gen_range(1..=3);
        let degree = rng.gen_range(0..=3);
        let c = random_cochain(&mut rng, nerve, level, degree, band, true)?;
        if !c.total_differential()?.total_differential()?.is_zero() {
            bad += 1;
        }
    }
    run.check(
        "total_differential_squared",
        bad == 0,
        json!({"samples": samples, "failures": bad}),
    );
    Ok(())
}

fn gauge_band(run: &Run) -> Result<GaugeBand> {
    Ok(GaugeBand {
        poly: run.get("poly")?,
        wave: run.get("wave")?,
    })
}

fn moduli_checks(run: &mut Run, r: &crate::cech::FlatModuliReport) {
    run.check(
        "classes_match_holonomy",
        r.classification_matches_holonomy,
        json!(r.pairs.len()),
    );
    run.check("holonomy_gauge_invariant", r.holonomy_gauge_invariant, json!(null));
    run.check(
        "automorphisms_are_constants",
        r.automorphism_dimension == 1 && r.automorphisms_are_constants,
        json!({"dimension": r.automorphism_dimension}),
    );
    let table: Vec<Value> = r
        .classes
        .iter()
        .zip(&r.class_labels)
        .map(|(c, l)| json!({"holonomy": l, "members": c}))
        .collect();
    run.record("classes", json!(table));
    run.record("samples", json!(r.samples));
}

fn flat_moduli_s1(run: &mut Run) -> Result<()> {
    let samples: usize = run.get("samples")?;
    let band = gauge_band(run)?;
    let s1 = Nerve::circle();
    let r = flat_moduli(&s1, 1, band, samples, run.seed())?;
    moduli_checks(run, &r);
    let third = flat_connection(&s1, &[Scalar::ratio(1, 3)], &BTreeMap::new())?;
    let jump = winding_connection(&s1, &[Scalar::ratio(1, 3)])?;
    let quarter = flat_connection(&s1, &[Scalar::ratio(1, 4)], &BTreeMap::new())?;
    let same = gauge_reduce(&third, &jump, band)?;
    run.check("same_holonomy_has_witness", same.is_equivalent(), json!(null));
    let other = gauge_reduce(&third, &quarter, band)?;
    let obstruction = match &other {
        GaugeOutcome::NoWitness { obstruction } => obstruction.clone(),
        GaugeOutcome::Witness(_) => None,
    };
    run.check(
        "different_holonomy_obstructed",
        obstruction.as_deref().is_some_and(|s| s.contains("holonomy")),
        json!(obstruction),
    );
    Ok(())
}

fn flat_moduli_t2(run: &mut Run) -> Result<()> {
    let samples: usize = run.get("samples")?;
    let r = flat_moduli(&Nerve::torus(2)?, 1, gauge_band(run)?, samples, run.seed())?;
    moduli_checks(run, &r);
    Ok(())
}

fn dglie_compare(run: &mut Run) -> Result<()> {
    let (a, members) = r3_corpus()?;
    let membership: Vec<bool> = members
        .iter()
        .map(|m| Ok(dglie_membership(&a, m)?.member))
        .collect::<Result<_>>()?;
    run.check("corpus_members", membership.iter().all(|&m| m), json!(membership));
    let mut closed = true;
    for x in &members {
        for y in &members {
            closed &= dglie_membership(&a, &dg_lie_bracket(x, y)?)?.member;
        }
    }
    run.check("closed_under_bracket", closed, json!(null));
    let r3 = a.nerve().global().clone();
    let e = SemidirectElement::on_patch(
        a.nerve(),
        2,
        0,
        parse_vector_field(&r3, "pd0")?,
        parse_form(&r3, "0*dx0")?,
    )?;
    let r = dglie_membership(&a, &e)?;
    let expect = parse_form(&r3, "dx1^dx2")?;
    run.check(
        "residual_of_non_member",
        !r.member && r.residual.form(0, 0) == Some(&expect),
        r.to_json(),
    );
    let report = compare_models(&a, &members)?;
    let verified = report
        .defects
        .iter()
        .all(|d| d.primitive.as_ref().is_some_and(|h| h.d() == d.defect));
    run.check(
        "images_hamiltonian",
        report.images.len() == members.len(),
        json!(report.images.len()),
    );
    run.check("defects_exact", verified, json!(report.defects.len()));
    run.record("comparison", report.to_json());
    run.record(
        "members",
        json!(members.iter().map(ToString::to_string).collect::<Vec<_>>()),
    );
    Ok(())
}

fn kernel_run(run: &mut Run, d: usize, levels: &[usize]) -> Result<()> {
    let chart = Chart::torus(d);
    let mut rows = Vec::new();
    for k in bands(run)? {
        for &n in levels {
            let kc = kernel_complex(&chart, n, k)?;
            let expect: Vec<usize> = (0..kc.betti.len()).map(|p| binomial(d, p)).collect();
            run.check(
                &format!("betti_n{n}_band{k}"),
                kc.betti == expect,
                json!({"betti": kc.betti, "binomial": expect}),
            );
            rows.push(json!({"n": n, "band": k, "complex": kc}));
        }
    }
    run.record("complexes", json!(rows));
    Ok(())
}

fn kernel_t2(run: &mut Run) -> Result<()> {
    kernel_run(run, 2, &[1, 2])
}

fn kernel_t3(run: &mut Run) -> Result<()> {
    kernel_run(run, 3, &[2, 3])
}

fn dw_r3(run: &mut Run) -> Result<()> {
    let slots = crate::conventions::DEFAULT_SLOT_ORDER;
    let r3 = Chart::euclidean(3);
    let p = check_pre_nplectic(parse_form(&r3, "dx0^dx1^dx2")?, 2)?;
    let fs = vec![parse_vector_field(&r3, "pd0")?, parse_vector_field(&r3, "pd1")?];
    let good = dw_check(&p, &parse_form(&r3, "x2")?, &fs, slots)?;
    run.check("solution_holds", good.holds, good.to_json());
    let bad = dw_check(&p, &parse_form(&r3, "0")?, &fs, slots)?;
    run.check(
        "violation_detected",
        !bad.holds && bad.residual == parse_form(&r3, "-dx2")?,
        bad.to_json(),
    );
    let r4 = Chart::euclidean(4);
    let q = check_pre_nplectic(parse_form(&r4, "dx0^dx1^dx2^dx3")?, 3)?;
    let gs: Vec<_> = ["pd0", "pd1", "pd2"]
        .iter()
        .map(|s| parse_vector_field(&r4, s))
        .collect::<Result<_>>()?;
    let plus = dw_check(&q, &parse_form(&r4, "x3")?, &gs, slots)?;
    let minus = dw_check(&q, &parse_form(&r4, "-x3")?, &gs, slots)?;
    run.check(
        "ternary_sign_selects_one",
        plus.holds != minus.holds,
        json!({"x3": plus.to_json(), "-x3": minus.to_json()}),
    );
    Ok(())
}

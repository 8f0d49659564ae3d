//! Acceptance suite. Prints one line per criterion and exits non-zero if
//! any of them fails.

use std::panic;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rolkit::classify::{b6_subalgebra, classify, magma_properties, ClassName};
use rolkit::congruence::{check_1_regular, principal_congruence, respects, Signature};
use rolkit::consequence::{consequence, gamma_exhaustive, gamma_holds, Outcome, Query};
use rolkit::enumerate::{are_isomorphic, enumerate_range};
use rolkit::fixtures;
use rolkit::laws::{check_all, Status};
use rolkit::ops::{bar_image, compute_residual, derived_ops, residuate, sasaki_product};
use rolkit::term::random_term;
use rolkit::FiniteAlgebra;

type CheckResult = Result<String, String>;
type Criterion = (&'static str, fn() -> CheckResult);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn members(max_n: usize, class: ClassName) -> Vec<FiniteAlgebra> {
    enumerate_range(max_n, class)
        .unwrap()
        .into_iter()
        .flat_map(|c| c.algebras)
        .collect()
}

fn counts(max: usize, deep: bool) -> Result<(String, Duration), String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rolkit"));
    cmd.args(["counts", "--max", &max.to_string()]);
    if deep {
        cmd.arg("--deep");
    }
    let start = Instant::now();
    let out = cmd.output().map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure(
        out.status.success(),
        format!("counts --max {max} exited with {}", out.status),
    )?;
    Ok((String::from_utf8_lossy(&out.stdout).into_owned(), took))
}

fn expected_counts(omls: &[usize], rols: &[usize]) -> String {
    let mut s = String::from("n\tomls\trols\n");
    for (i, (o, r)) in omls.iter().zip(rols).enumerate() {
        s.push_str(&format!("{}\t{o}\t{r}\n", i + 2));
    }
    s
}

fn counts_table() -> CheckResult {
    let (out, took) = counts(10, false)?;
    let want = expected_counts(&[1, 0, 1, 0, 1, 0, 2, 0, 2], &[1, 0, 1, 0, 2, 0, 4, 0, 7]);
    ensure(out == want, format!("counts --max 10 printed\n{out}"))?;
    ensure(took < Duration::from_secs(600), format!("took {took:?}"))?;
    let (deep, deep_took) = counts(12, true)?;
    let want = expected_counts(&[1, 0, 1, 0, 1, 0, 2, 0, 2, 0, 3], &[1, 0, 1, 0, 2, 0, 4, 0, 7, 0, 15]);
    ensure(deep == want, format!("counts --max 12 --deep printed\n{deep}"))?;
    ensure(
        deep_took < Duration::from_secs(7200),
        format!("extended run took {deep_took:?}"),
    )?;
    Ok(format!("n <= 10 in {took:.2?}, n <= 12 in {deep_took:.2?}"))
}

fn b6_residual() -> CheckResult {
    let res = compute_residual(&fixtures::b6()).map_err(|w| format!("{w:?}"))?;
    let want = fixtures::b6_reference_residual();
    let wrong: Vec<(usize, usize)> = (0..6)
        .flat_map(|x| (0..6).map(move |z| (x, z)))
        .filter(|&(x, z)| res.get(x, z) != want.get(x, z))
        .collect();
    ensure(wrong.is_empty(), format!("entries differ at {wrong:?}"))?;
    Ok("36 of 36 entries".into())
}

fn law_suites() -> CheckResult {
    let start = Instant::now();
    let algebras = members(10, ClassName::Rol);
    let mut checked = 0;
    for (i, a) in algebras.iter().enumerate() {
        for r in check_all(a) {
            match &r.status {
                Status::Pass => checked += 1,
                Status::Fail(w) => return Err(format!("algebra {i} (size {}): {} {w:?}", a.size(), r.id)),
                Status::Skipped(why) => return Err(format!("algebra {i}: {} skipped ({why})", r.id)),
            }
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(300), format!("took {took:?}"))?;
    Ok(format!("{} algebras, {checked} law checks, {took:.2?}", algebras.len()))
}

fn forbidden_subalgebra() -> CheckResult {
    let algebras = members(10, ClassName::Ol);
    let disagreements: Vec<usize> = algebras
        .iter()
        .enumerate()
        .filter(|(_, a)| classify(a).unwrap().is_oml == b6_subalgebra(a).is_some())
        .map(|(i, _)| i)
        .collect();
    ensure(disagreements.is_empty(), format!("disagreements at {disagreements:?}"))?;
    Ok(format!("{} ortholattices, 0 disagreements", algebras.len()))
}

fn regularity() -> CheckResult {
    let algebras = members(8, ClassName::Rol);
    for (i, a) in algebras.iter().enumerate() {
        if let Some((t, u)) = check_1_regular(a).map_err(|e| e.to_string())? {
            return Err(format!(
                "algebra {i}: {} and {} share the class of 1",
                t.render(a),
                u.render(a)
            ));
        }
    }
    let b6 = residuate(&fixtures::b6()).map_err(|w| format!("{w:?}"))?;
    let e = |s| b6.element_named(s).unwrap();
    let theta = principal_congruence(&b6, (e("a"), e("nb")), Signature::Ol).map_err(|e| e.to_string())?;
    let w = match respects(&theta, b6.residual().unwrap()) {
        Ok(()) => return Err("the OL congruence of (a, nb) respects the residual".into()),
        Err(w) => w,
    };
    ensure(
        w.elements == [e("a"), e("a"), e("nb")] && w.values == [e("1"), e("b")],
        format!("unexpected witness {w:?}"),
    )?;
    ensure(
        b6.res(e("a"), e("a")) == e("1") && b6.res(e("a"), e("nb")) == e("b"),
        "a\\a or a\\nb",
    )?;
    Ok(format!("{} algebras 1-regular; a\\a = 1 vs a\\nb = b", algebras.len()))
}

fn translation() -> CheckResult {
    let small = members(6, ClassName::Rol);
    let mut pairs = 0;
    for (i, a) in small.iter().enumerate() {
        let image = bar_image(a).map_err(|e| e.to_string())?;
        let sweep = gamma_exhaustive(i, a, &image, 2, 3);
        if let Some(v) = sweep.violation {
            return Err(format!("exhaustive: {v:?}"));
        }
        pairs += sweep.distinct_by_depth.last().copied().unwrap_or(0);
    }

    let catalog = members(8, ClassName::Rol);
    let images: Vec<_> = catalog.iter().map(|a| bar_image(a).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..1000 {
        let k = rng.gen_range(1..=3);
        let t = random_term(&mut rng, 4, k);
        let i = rng.gen_range(0..catalog.len());
        let env: Vec<usize> = (0..k).map(|_| rng.gen_range(0..catalog[i].size())).collect();
        ensure(
            gamma_holds(&t, &catalog[i], &images[i], &env),
            format!("random trial {trial}: {t:?} on {i} at {env:?}"),
        )?;
    }

    let b6 = residuate(&fixtures::b6()).map_err(|w| format!("{w:?}"))?;
    let ops = derived_ops(&b6).unwrap();
    let e = |s| b6.element_named(s).unwrap();
    let (a, nb) = (e("a"), e("nb"));
    let lhs = ops.bar[b6.res(a, nb)];
    let rhs = b6.res(ops.bar[a], ops.bar[nb]);
    ensure(
        lhs == e("b") && rhs == e("1"),
        format!("bar(a\\nb) = {}, bar a \\ bar nb = {}", b6.name(lhs), b6.name(rhs)),
    )?;
    Ok(format!(
        "{} algebras exhaustively ({pairs} function pairs at depth 3), 1000 random triples, bar(a\\nb) = b != 1",
        small.len()
    ))
}

fn counterexample_is_b6(query: &Query) -> Result<String, String> {
    let oml = members(8, ClassName::Oml);
    let held = consequence(&oml, query, 4).map_err(|e| e.to_string())?;
    ensure(held.holds(), format!("fails over OML: {held:?}"))?;
    let rol = members(8, ClassName::Rol);
    let outcome = consequence(&rol, query, 4).map_err(|e| e.to_string())?;
    let Outcome::Counterexample(c) = outcome else {
        return Err("holds over ROL n <= 8".into());
    };
    ensure(c.verify(&rol, query), "counterexample does not re-verify")?;
    let b6 = residuate(&fixtures::b6()).unwrap();
    let f = are_isomorphic(&rol[c.algebra], &b6).ok_or(format!("algebra {} is not B6", c.algebra))?;
    let named: Vec<String> = c
        .assignment
        .iter()
        .enumerate()
        .map(|(i, &v)| format!("{}={}", query.vars.name(i), b6.name(f[v])))
        .collect();
    Ok(format!(
        "algebra {} ~ B6, {}: lhs = {}, rhs = {}",
        c.algebra,
        named.join(", "),
        b6.name(f[c.goal_values.0]),
        b6.name(f[c.goal_values.1])
    ))
}

fn consequence_engine() -> CheckResult {
    let residual = Query::parse(&[], "x \\ y = x -> y").map_err(|e| e.to_string())?;
    let first = counterexample_is_b6(&residual)?;
    let tilde = Query::parse(&[], "~x = -x").map_err(|e| e.to_string())?;
    let second = counterexample_is_b6(&tilde)?;

    let b6 = residuate(&fixtures::b6()).unwrap();
    let e = |s| b6.element_named(s).unwrap();
    let hook = rolkit::ops::sasaki_hook(&b6);
    let (a, nb) = (e("a"), e("nb"));
    ensure(
        b6.res(a, nb) == e("b") && hook.get(a, nb) == e("1"),
        "a\\nb or a->nb on B6",
    )?;
    ensure(b6.res(a, 0) == e("b") && b6.neg(a) == e("na"), "~a on B6")?;
    Ok(format!(
        "holds over OML n <= 8; B6 counterexamples [{first}] [{second}]"
    ))
}

fn fixture_checks() -> CheckResult {
    let a = fixtures::nonflexible();
    let class = classify(&a).map_err(|w| format!("{w:?}"))?;
    ensure(class.is_ol && !class.is_oml && !class.is_rol, format!("{class:?}"))?;
    let props = magma_properties(&sasaki_product(&a));
    let w = props
        .witness(rolkit::classify::MagmaLaw::Flexible)
        .ok_or("product is flexible")?;
    let (x, y) = (w.elements[0], w.elements[1]);
    let prod = sasaki_product(&a);
    ensure(
        w.values == [x, 0] && prod.get(prod.get(x, y), x) == x && prod.get(x, prod.get(y, x)) == 0,
        format!("unexpected witness {w:?}"),
    )?;
    Ok(format!(
        "OL, not OML, not ROL; (x.y).x = {0}, x.(y.x) = 0 at x={0}, y={1}",
        a.name(x),
        a.name(y)
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("OML and ROL counts", counts_table),
        ("B6 residual table", b6_residual),
        ("law suites on ROL catalogs", law_suites),
        ("orthomodular iff B6-free", forbidden_subalgebra),
        ("1-regularity", regularity),
        ("negative translation", translation),
        ("consequence engine", consequence_engine),
        ("non-flexible fixture", fixture_checks),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(check).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match result {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

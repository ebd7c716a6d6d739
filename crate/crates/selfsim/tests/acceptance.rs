//! One line per acceptance criterion. Exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{f2_subspaces, mask, mask_set, naive_level_matrices, prime, Ctx, Elt};
use selfsim::catalog::{abelian_fixed, abelian_shift_finite, construct, entries, heisenberg_q, CatalogParams};
use selfsim::lie::{sl2, LieElement};
use selfsim::linalg::span_closure;
use selfsim::structure::{
    associated_endomorphism, build_psi, build_psi_twisted, check_conditions, contracting_check, invariant_ideal,
    is_finite_state, is_recurrent, kernel_of_psi, transitivity, verify_homomorphism, weakly_branched_witness_test,
    FiniteStateVerdict, SelfSimilarStructure, VirtualEndomorphism,
};
use selfsim::truncalg::{witt, TruncPolyAlgebra};
use selfsim::wreath::{level_action, level_kernel, level_operator_matrix, TensorLevelVector, WreathProduct};
use selfsim::{Error, LinearOperator, SparseVec, Subspace};

type Outcome = Result<String, String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn axioms() -> Outcome {
    let f3 = prime(3);
    let w = WreathProduct::new(TruncPolyAlgebra::new(f3, 1, None).map_err(err)?, Arc::new(sl2(f3)));
    let r = w.verify_axioms().map_err(err)?;
    ensure(r.passed(), || format!("wreath product: {:?}", r.violation))?;
    for p in [3, 5, 7] {
        let real = witt(p).map_err(err)?;
        ensure(real.axioms.passed(), || format!("W(1) over F_{p} fails the axioms"))?;
        ensure(real.homomorphism_defect().map_err(err)?.is_none(), || format!("e_i ↦ x^(i+1)∂ over F_{p}"))?;
        let l = &real.algebra;
        let top = p as i64 - 2;
        for i in -1..=top {
            for j in -1..=top {
                let e = |k: i64| l.element(&format!("e{k}")).unwrap();
                let got = l.bracket(&e(i), &e(j)).map_err(err)?;
                let want = if (-1..=top).contains(&(i + j)) {
                    e(i + j).scaled(&l.field().from_i64(j - i))
                } else {
                    LieElement::zero()
                };
                ensure(got == want, || format!("[e{i}, e{j}] over F_{p}"))?;
            }
        }
    }
    Ok(format!(
        "wreath (F_3[x]/(x^3) ⊗ sl_2) ⋉ Der: {} pairs, {} triples; Witt relations for p = 3, 5, 7",
        r.pairs_checked, r.triples_checked
    ))
}

fn twisted_sl() -> Outcome {
    let mut parts = Vec::new();
    for (n, p) in [(1, 3), (1, 5), (2, 5)] {
        let psi = build_psi_twisted(n, prime(p)).map_err(err)?;
        let r = verify_homomorphism(&psi).map_err(err)?;
        ensure(r.passed(), || format!("n = {n}, F_{p}: {:?}", r.counterexample))?;
        let engine = psi.engine_with_cap(20_000);
        let mut dims = Vec::new();
        for m in 1..=3 {
            dims.push(level_kernel(&engine, m).map_err(err)?.dim());
        }
        ensure(dims.iter().all(|&d| d == 0), || format!("n = {n}, F_{p}: level kernels {dims:?}"))?;
        parts.push(format!("(n={n}, F_{p}) {} pairs, kernels {dims:?}", r.pairs_checked));
    }
    ensure(matches!(build_psi_twisted(1, prime(2)), Err(Error::HypothesisViolated(_))), || {
        "(n=1, F_2) accepted".into()
    })?;
    Ok(format!("{}; (n=1, F_2) rejected", parts.join(", ")))
}

fn pipeline() -> Outcome {
    let mut parts = Vec::new();
    for (name, params) in [
        ("abelian_shift", CatalogParams::new(0, 1, 5)),
        ("heisenberg_q", CatalogParams::new(0, 1, 0)),
        ("lamplighter", CatalogParams::new(3, 1, 6)),
        ("lamplighter", CatalogParams::new(3, 2, 6)),
    ] {
        let object = construct(name, &params).map_err(err)?;
        let ve = object.ve.as_ref().ok_or("no virtual endomorphism")?;
        let profile = object.profile.as_ref().ok_or("no profile")?;
        let c = check_conditions(profile, ve).map_err(err)?;
        ensure(c.passed(), || format!("{name}: {:?}", c.failure))?;
        let psi = build_psi(ve, profile).map_err(err)?;
        ensure(verify_homomorphism(&psi).map_err(err)?.passed(), || format!("{name}: ψ not a homomorphism"))?;
        let back = associated_endomorphism(&psi).map_err(err)?;
        ensure(back.ideal() == ve.ideal(), || format!("{name}: H differs"))?;
        for h in ve.ideal().basis() {
            let h = LieElement::from_vec(h.clone());
            ensure(back.theta(&h).map_err(err)? == ve.theta(&h).map_err(err)?, || {
                format!("{name}: θ differs at {}", ve.algebra().format(&h))
            })?;
        }
        parts.push(format!("{name} (n = {})", params.n));
    }
    Ok(format!("conditions, homomorphism and θ round trip for {}", parts.join(", ")))
}

fn finite_instances() -> Result<Vec<(String, VirtualEndomorphism, SelfSimilarStructure)>, String> {
    let mut out = Vec::new();
    for e in entries() {
        let ns = if e.params.contains('n') { 1..=5 } else { 1..=1 };
        for p in [0, 2, 3, 5] {
            for n in ns.clone() {
                let mut params = e.defaults.clone();
                params.p = p;
                params.n = n;
                let Ok(object) = construct(e.name, &params) else { continue };
                if object.algebra.is_truncated() || object.algebra.dim() > 6 {
                    continue;
                }
                let Some(psi) = object.psi else { continue };
                let ve = match object.ve {
                    Some(ve) => ve,
                    None => associated_endomorphism(&psi).map_err(err)?,
                };
                out.push((format!("{} (p = {p}, n = {n})", e.name), ve, psi));
            }
        }
    }
    Ok(out)
}

fn kernel_and_ideal() -> Outcome {
    let instances = finite_instances()?;
    for (name, ve, psi) in &instances {
        let ctx = Ctx::of(ve.field());
        let w = psi.wreath();
        let columns: Vec<Vec<Elt>> = psi.images().iter().map(|i| ctx.dense(&w.flatten(i), w.flat_dim())).collect();
        let oracle = ctx.kernel(&columns);
        let lib = kernel_of_psi(ve).map_err(err)?;
        ensure(lib.dim() == oracle.len() && ctx.inside(&oracle, &lib), || {
            format!("{name}: kernel dim {} vs dense {}", lib.dim(), oracle.len())
        })?;
    }
    let f2 = prime(2);
    let small = [
        abelian_fixed(f2).map_err(err)?,
        heisenberg_q(f2).map_err(err)?,
        abelian_shift_finite(f2, 2).map_err(err)?,
        abelian_shift_finite(f2, 3).map_err(err)?,
    ];
    let mut verdicts = Vec::new();
    for ve in &small {
        let l = ve.algebra();
        let d = l.dim();
        let h = mask_set(ve.ideal());
        let element = |m: u32| {
            LieElement::from_vec(SparseVec::from_entries((0..d).filter(|i| m >> i & 1 == 1).map(|i| (i, f2.one()))))
        };
        let mut best = vec![0u32];
        for v in f2_subspaces(d) {
            let invariant = v.iter().all(|&k| {
                h.contains(&k)
                    && (0..d).all(|b| v.contains(&mask(l.bracket(&l.basis_element(b), &element(k)).unwrap().coeffs())))
                    && v.contains(&mask(ve.theta(&element(k)).unwrap().coeffs()))
            });
            if invariant && v.len() > best.len() {
                best = v;
            }
        }
        let lib = invariant_ideal(ve).map_err(err)?;
        ensure(mask_set(&lib) == best, || format!("{}: greatest θ-invariant ideal differs", l.name()))?;
        verdicts.push(lib.dim());
    }
    Ok(format!(
        "{} finite instances agree with the dense kernel; F_2 ideal dims {verdicts:?} match enumeration",
        instances.len()
    ))
}

fn lamplighter_items() -> Outcome {
    for n in [1, 2] {
        let object = construct("lamplighter", &CatalogParams::new(3, n, 6)).map_err(err)?;
        let psi = object.psi.as_ref().ok_or("no structure")?;
        let l = psi.algebra();
        let field = l.field();
        let tag = |s: &str| format!("n = {n}: {s}");
        ensure(verify_homomorphism(psi).map_err(err)?.passed(), || tag("homomorphism"))?;
        let t = transitivity(psi, 3).map_err(err)?;
        ensure(t.orbit_dims == [3, 9, 27], || tag(&format!("orbit dims {:?}", t.orbit_dims)))?;
        for i in 1..=n {
            let q = l.element(&format!("q{i}")).map_err(err)?;
            let v = is_finite_state(psi, &q, 12);
            ensure(matches!(v, FiniteStateVerdict::FiniteState { dim, .. } if dim == i + 1), || {
                tag(&format!("states of q{i}: {v:?}"))
            })?;
        }
        let engine = psi.engine();
        for k in 0..=3 {
            let a = l.element(&format!("a{k}")).map_err(err)?;
            for m in 1..=k {
                ensure(level_operator_matrix(&engine, &a, m).map_err(err)?.is_zero(), || {
                    tag(&format!("x^{k} acts at level {m}"))
                })?;
            }
            ensure(!level_operator_matrix(&engine, &a, k + 1).map_err(err)?.is_zero(), || {
                tag(&format!("x^{k} vanishes at level {}", k + 1))
            })?;
        }
        ensure(is_recurrent(object.ve.as_ref().unwrap()).recurrent, || tag("not recurrent"))?;
        let span = |symbols: Vec<String>| {
            Subspace::span(field, l.dim(), &symbols.iter().map(|s| l.element(s).unwrap().into_vec()).collect::<Vec<_>>())
        };
        let nucleus = span((1..=n).map(|i| format!("q{i}")).chain((0..n).map(|i| format!("a{i}"))).collect());
        let elements: Vec<LieElement> = (0..l.dim()).map(|b| l.basis_element(b)).collect();
        let c = contracting_check(psi, &nucleus, &elements, 8);
        ensure(c.contracting(), || tag("not contracting"))?;
        let a_ideal = span((0..=6).map(|k| format!("a{k}")).collect());
        let wb = weakly_branched_witness_test(psi, &a_ideal).map_err(err)?;
        ensure(!wb.contains && wb.obstruction_dim == 0, || tag(&format!("{wb:?}")))?;
    }
    Ok("p = 3, n = 1, 2, D = 6: homomorphism, transitivity, finite states, level vanishing, recurrence, contraction and the branching witness hold".into())
}

fn witt_generation() -> Outcome {
    let mut total = 0;
    for p in [5u32, 7] {
        let real = witt(p).map_err(err)?;
        let l = &real.algebra;
        let field = l.field();
        let e = l.element("e-1").map_err(err)?;
        for j0 in 2..=p as usize - 3 {
            let lead = j0 + 1;
            for code in 0..(p as usize).pow(lead as u32) {
                let mut terms = vec![(lead, field.one())];
                let mut rest = code;
                for i in 0..lead {
                    terms.push((i, field.from_i64((rest % p as usize) as i64)));
                    rest /= p as usize;
                }
                let f = LieElement::from_vec(SparseVec::from_entries(terms));
                let generated = l.generated_subalgebra(&[e.clone(), f.clone()]).map_err(err)?;
                ensure(generated.is_full(), || format!("p = {p}: {} generates dim {}", l.format(&f), generated.dim()))?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} generators f with leading index in [2, p-3] for p = 5, 7 give all of W(1)"))
}

fn level_instances() -> Vec<SelfSimilarStructure> {
    let mut out = Vec::new();
    for name in ["lamplighter", "lamplighter_corrupted", "sl_twisted", "sl_diagonal"] {
        for p in [2, 3] {
            if let Ok(object) = construct(name, &CatalogParams::new(p, 1, 4)) {
                out.extend(object.psi);
            }
        }
    }
    out
}

fn oracle_equivalence() -> Outcome {
    let mut operators = 0;
    let mut closures = 0;
    for psi in level_instances() {
        let field = psi.algebra().field();
        let ctx = Ctx::of(field);
        let engine = psi.engine();
        let q = psi.wreath().alphabet().dim();
        for level in (1..).take_while(|m| q.pow(*m as u32) <= 27) {
            let dim = q.pow(level as u32);
            let naive = naive_level_matrices(&psi, level);
            let mut matrices = Vec::new();
            for b in 0..psi.algebra().dim() {
                let a = psi.algebra().basis_element(b);
                let lib = level_operator_matrix(&engine, &a, level).map_err(err)?;
                for col in 0..dim {
                    let t = TensorLevelVector::from_sparse(&SparseVec::unit(col, field), q, level);
                    let direct = level_action(psi.wreath(), psi.images(), &a, &t).map_err(err)?;
                    ensure(
                        ctx.dense(lib.column(col), dim) == naive[b][col] && ctx.dense(&direct.to_sparse(q), dim) == naive[b][col],
                        || format!("{} level {level}: column {col} of {}", psi.name(), psi.algebra().symbol(b)),
                    )?;
                }
                matrices.push(engine.basis_matrix(b, level).map_err(err)?);
                operators += 1;
            }
            let ops: Vec<&dyn LinearOperator> = matrices.iter().map(|m| m.as_ref() as &dyn LinearOperator).collect();
            for start in 0..dim {
                let seed = Subspace::span(field, dim, &[SparseVec::unit(start, field)]);
                let lib = span_closure(&seed, &ops).map_err(err)?;
                let oracle = ctx.closure_dim(&[ctx.dense(&SparseVec::unit(start, field), dim)], &naive);
                ensure(lib.dim() == oracle, || format!("{} level {level}: closure of {start}", psi.name()))?;
                closures += 1;
            }
        }
    }
    Ok(format!("{operators} level operators and {closures} span closures match the naive expansion"))
}

fn negative_controls() -> Outcome {
    let object = construct("lamplighter_corrupted", &CatalogParams::new(3, 1, 6)).map_err(err)?;
    let r = verify_homomorphism(object.psi.as_ref().ok_or("no structure")?).map_err(err)?;
    let c = r.counterexample.ok_or("corrupted ψ passes")?;
    ensure((c.left.as_str(), c.right.as_str()) == ("q1", "a0"), || format!("witness ({}, {})", c.left, c.right))?;
    let witness = "[e12, x*e23] = x*e13";
    let mut seen = Vec::new();
    for _ in 0..3 {
        let gl3 = construct("gl3_nilpotent", &CatalogParams::new(3, 1, 4)).map_err(err)?;
        ensure(gl3.psi.is_none(), || "gl3 produced a structure".into())?;
        seen.push(gl3.issues.join("; "));
    }
    ensure(seen.iter().all(|s| s.contains(witness) && *s == seen[0]), || format!("gl3 issues {seen:?}"))?;
    Ok(format!("corrupted lamplighter fails at ({}, {}); gl3 reports {witness}", c.left, c.right))
}

fn main() -> ExitCode {
    let criteria: [(&str, Option<Duration>, fn() -> Outcome); 8] = [
        ("axioms", Some(Duration::from_secs(5)), axioms),
        ("twisted sl_(n+1)", Some(Duration::from_secs(10)), twisted_sl),
        ("virtual endomorphism pipeline", None, pipeline),
        ("kernel and invariant ideal cross-checks", None, kernel_and_ideal),
        ("lamplighter", Some(Duration::from_secs(30)), lamplighter_items),
        ("Witt generation", None, witt_generation),
        ("oracle equivalence", None, oracle_equivalence),
        ("negative controls", None, negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(limit)) if elapsed > *limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {status} [{name}] ({:.2}s) {detail}", i + 1, elapsed.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

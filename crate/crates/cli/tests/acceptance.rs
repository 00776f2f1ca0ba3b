//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and fails if any criterion fails.

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use ashg_core::algorithms::{
    aziz_reference, cis_star_nonneg, cis_star_nonzero, cis_upper, cns_pairs, symmetric_dynamics,
};
use ashg_core::exact::{exists_stable, max_welfare_partition, EnumerationBudget};
use ashg_core::instances::{intro_partition, make_instance, InstanceFamily};
use ashg_core::io::{write_game, write_partition};
use ashg_core::model::{feasible_k_partition_exists, feasible_partition_exists};
use ashg_core::prefs::{partition_utility, social_welfare};
use ashg_core::reductions::{
    find_exact_cover, find_small_maximal_matching, mmm_to_ns_is, witness_partition, x3c_to_cns,
    x3c_to_ns_bounded, Certificate, MMMInstance, X3CInstance,
};
use ashg_core::stability::{apply, verify, verify_all};
use ashg_core::{Deviation, Error, Game, Partition, SizeBounds, StabilityConcept, Target};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sb(l: usize, u: usize) -> SizeBounds {
    SizeBounds::new(l, u).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_game(r: &mut ChaCha8Rng, n: usize, values: &[i64], symmetric: bool) -> Game<i64> {
    let mut table = vec![vec![0i64; n]; n];
    for a in 0..n {
        for b in 0..n {
            if a != b && (!symmetric || a < b) {
                let w = *values.choose(r).unwrap();
                table[a][b] = w;
                if symmetric {
                    table[b][a] = w;
                }
            }
        }
    }
    Game::from_table(&table, symmetric).unwrap()
}

fn random_bounds(r: &mut ChaCha8Rng, n: usize) -> SizeBounds {
    loop {
        let hi = r.gen_range(1..=n.max(1));
        let lo = r.gen_range(1..=hi);
        let b = sb(lo, hi);
        if feasible_partition_exists(n, b) {
            return b;
        }
    }
}

/// Uniform coalition count among the feasible ones, random sizes, shuffled
/// agents.
fn random_partition(r: &mut ChaCha8Rng, n: usize, b: SizeBounds) -> Partition {
    let ks: Vec<usize> = (1..=n).filter(|&k| k * b.lower() <= n && n <= k * b.upper()).collect();
    let k = *ks.choose(r).unwrap();
    let mut sizes = vec![b.lower(); k];
    for _ in 0..n - k * b.lower() {
        let open: Vec<usize> = (0..k).filter(|&i| sizes[i] < b.upper()).collect();
        sizes[*open.choose(r).unwrap()] += 1;
    }
    let mut agents: Vec<usize> = (0..n).collect();
    agents.shuffle(r);
    let mut cs = Vec::new();
    let mut rest = &agents[..];
    for s in sizes {
        let (head, tail) = rest.split_at(s);
        cs.push(head.to_vec());
        rest = tail;
    }
    Partition::new(n, cs).unwrap()
}

/// Every set partition of `0..n`, as `(coalition count, smallest block,
/// largest block)`, without any size pruning.
fn block_shapes(n: usize) -> BTreeSet<(usize, usize, usize)> {
    fn rec(i: usize, n: usize, sizes: &mut Vec<usize>, out: &mut BTreeSet<(usize, usize, usize)>) {
        if i == n {
            let lo = sizes.iter().copied().min().unwrap_or(0);
            let hi = sizes.iter().copied().max().unwrap_or(0);
            out.insert((sizes.len(), lo, hi));
            return;
        }
        for j in 0..sizes.len() {
            sizes[j] += 1;
            rec(i + 1, n, sizes, out);
            sizes[j] -= 1;
        }
        sizes.push(1);
        rec(i + 1, n, sizes, out);
        sizes.pop();
    }
    let mut out = BTreeSet::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for n in 1..=12 {
        let shapes = block_shapes(n);
        for hi in 1..=6 {
            for lo in 1..=hi {
                let b = sb(lo, hi);
                let fits = |&(_, s, l): &(usize, usize, usize)| lo <= s && l <= hi;
                let any = shapes.iter().any(fits);
                ensure(feasible_partition_exists(n, b) == any, || {
                    format!("existence formula disagrees at n={n}, bounds {b}")
                })?;
                for k in 1..=n {
                    let with_k = shapes.iter().any(|t| t.0 == k && fits(t));
                    ensure(feasible_k_partition_exists(n, k, b) == with_k, || {
                        format!("k-formula disagrees at n={n}, k={k}, bounds {b}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    ensure(!feasible_partition_exists(8, sb(5, 7)), || "(8, 5, 7) should be infeasible".into())?;
    ensure(!block_shapes(8).iter().any(|&(_, s, l)| 5 <= s && l <= 7), || {
        "enumeration finds a (5,7)-partition of 8".into()
    })?;
    Ok(format!("{checked} (n, k, bounds) cases agree; n=8 with bounds (5,7) infeasible"))
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = ashg_cli::run(std::iter::once("ashg").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn criterion_2() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let write = |name: &str, text: String| std::fs::write(Path::new(&path(name)), text).unwrap();
    let v: Game<i64> = make_instance(&InstanceFamily::IntroPositive { k: 3 }).unwrap();
    let v2: Game<i64> = make_instance(&InstanceFamily::IntroNegative { k: 3 }).unwrap();
    write("v.txt", write_game(&v));
    write("v2.txt", write_game(&v2));
    write("pi.txt", write_partition(&intro_partition(3)));

    let cases = [
        ("ns*", "v.txt", 0, "stable NS*\n"),
        ("cis", "v.txt", 1, "not CIS\ndeviation 1 -> 3 4\n"),
        ("ns", "v2.txt", 0, "stable NS\n"),
    ];
    for (concept, game, code, stdout) in cases {
        let got = run_cli(&["verify", "--concept", concept, "--bounds", "2:3", &path(game), &path("pi.txt")]);
        ensure(got == (code, stdout.to_string()), || {
            format!("verify {concept} on {game}: expected ({code}, {stdout:?}), got {got:?}")
        })?;
    }
    Ok("(N,v) NS* exit 0, (N,v) CIS exit 1, (N,v') NS exit 0".into())
}

fn criterion_3() -> Outcome {
    let b = sb(2, 3);
    let budget = EnumerationBudget::default();
    let star: Game<i64> = make_instance(&InstanceFamily::StarNoCis { lambda: 2 }).unwrap();
    let cycle: Game<i64> = make_instance(&InstanceFamily::CycleNoIsStar { n: 7 }).unwrap();
    let tri: Game<i64> = make_instance(&InstanceFamily::PairsTriangleNoCnsStar { lambda: 2 }).unwrap();
    let ex = |g: &Game<i64>, c| exists_stable(g, b, c, budget).map_err(|e| e.to_string());
    ensure(ex(&star, StabilityConcept::CIS)?.is_none(), || "star has a CIS partition".into())?;
    let p = ex(&star, StabilityConcept::CIS_STAR)?.ok_or("star has no CIS* partition")?;
    ensure(verify(&star, &p, b, StabilityConcept::CIS_STAR).unwrap().stable, || "CIS* witness rejected".into())?;
    ensure(ex(&cycle, StabilityConcept::IS_STAR)?.is_none(), || "cycle has an IS* partition".into())?;
    ensure(ex(&tri, StabilityConcept::CNS_STAR)?.is_none(), || "triangle game has a CNS* partition".into())?;
    Ok(format!("star: no CIS, CIS* {p}; cycle(7): no IS*; pairs+triangle: no CNS*"))
}

fn criterion_4() -> Outcome {
    const GAMES: usize = 1000;
    let all: Vec<i64> = (-3..=3).collect();
    let nonzero: Vec<i64> = all.iter().copied().filter(|&w| w != 0).collect();
    let nonneg: Vec<i64> = (0..=3).collect();
    let mut r = rng(4);

    for _ in 0..GAMES {
        let n = r.gen_range(1..=8);
        let g = random_game(&mut r, n, &all, false);
        let mu = r.gen_range(2..=n.max(2));
        let (p, _) = cis_upper(&g, mu).map_err(|e| e.to_string())?;
        let rep = verify(&g, &p, sb(1, mu), StabilityConcept::CIS).map_err(|e| e.to_string())?;
        ensure(rep.stable, || format!("cis_upper: {p} not CIS for mu={mu} on {g:?}"))?;

        let p = cns_pairs(&g);
        let rep = verify(&g, &p, sb(1, 2), StabilityConcept::CNS).map_err(|e| e.to_string())?;
        ensure(rep.stable, || format!("cns_pairs: {p} not CNS on {g:?}"))?;
    }

    let mut infeasible = 0;
    let mut refused = 0;
    let mut checked = 0;
    for (name, values) in [("cis_star_nonzero", &nonzero), ("cis_star_nonneg", &nonneg)] {
        // sample until GAMES requests per algorithm produced a partition
        let mut produced = 0;
        while produced < GAMES {
            let n = r.gen_range(1..=8);
            let g = random_game(&mut r, n, values, false);
            let hi = r.gen_range(1..=n);
            let b = sb(r.gen_range(1..=hi), hi);
            let k = r.gen_range(1..=n);
            let out = if name == "cis_star_nonzero" { cis_star_nonzero(&g, b, k) } else { cis_star_nonneg(&g, b, k) };
            let expected_feasible = b.lower() * k <= n && n <= b.upper() * k;
            match out {
                Err(Error::Infeasible { .. }) => {
                    ensure(!expected_feasible, || format!("{name}: Infeasible for n={n} k={k} {b}"))?;
                    infeasible += 1;
                }
                // no CIS* k-partition need exist with lower bound 1
                Err(Error::UnsupportedBounds(_)) => {
                    ensure(expected_feasible && b.lower() == 1, || format!("{name}: refused {b}"))?;
                    refused += 1;
                }
                Err(e) => return Err(format!("{name}: unexpected error {e}")),
                Ok(p) => {
                    ensure(expected_feasible, || format!("{name}: output for infeasible n={n} k={k} {b}"))?;
                    ensure(p.len() == k, || format!("{name}: {} coalitions, wanted {k}", p.len()))?;
                    let rep = verify(&g, &p, b, StabilityConcept::CIS_STAR).map_err(|e| e.to_string())?;
                    ensure(rep.stable, || format!("{name}: {p} not CIS* for {b} on {g:?}"))?;
                    checked += 1;
                    produced += 1;
                }
            }
        }
    }
    Ok(format!(
        "{GAMES} games each for cis_upper and cns_pairs; {checked} fixed-k outputs CIS*; {infeasible} infeasible and {refused} lower-bound-1 requests answered correctly"
    ))
}

fn criterion_5() -> Outcome {
    let g: Game<i64> = make_instance(&InstanceFamily::AzizFailure).unwrap();
    let p = aziz_reference(&g);
    let expected = Partition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
    ensure(p == expected, || format!("reference returned {p}"))?;
    let rep = verify(&g, &p, sb(1, 4), StabilityConcept::CIS).unwrap();
    let target = p.coalition_id(1);
    let want = Deviation { agent: 2, target: Target::Coalition(target) };
    ensure(rep.witness == Some(want), || format!("witness {:?}, expected a3 -> {{a2,a4}}", rep.witness))?;
    let (q, _) = cis_upper(&g, 4).unwrap();
    ensure(verify(&g, &q, sb(1, 4), StabilityConcept::CIS).unwrap().stable, || format!("cis_upper {q} not CIS"))?;
    Ok(format!("reference {p} blocked by a3 -> {{a2,a4}}; cis_upper {q} is CIS"))
}

fn criterion_6() -> Outcome {
    const GAMES: usize = 100;
    let values: Vec<i64> = (-3..=3).collect();
    let mut r = rng(6);
    let mut total_steps = 0;
    for _ in 0..GAMES {
        let n = r.gen_range(1..=8);
        let g = random_game(&mut r, n, &values, true);
        let b = random_bounds(&mut r, n);
        let init = random_partition(&mut r, n, b);
        let run = symmetric_dynamics(&g, b, &init).map_err(|e| e.to_string())?;
        let mut p = init.clone();
        ensure(run.welfare[0] == social_welfare(&g, &p), || "initial welfare".into())?;
        for (i, &d) in run.moves.iter().enumerate() {
            let before = partition_utility(&g, &p, d.agent);
            let next = apply(&p, d);
            let gain = partition_utility(&g, &next, d.agent) - before;
            let delta = social_welfare(&g, &next) - social_welfare(&g, &p);
            ensure(gain > 0 && delta == 2 * gain, || format!("step {i}: gain {gain}, welfare change {delta}"))?;
            ensure(run.welfare[i + 1] == social_welfare(&g, &next), || format!("welfare log at step {i}"))?;
            p = next;
        }
        ensure(p == run.partition, || "replayed moves disagree with the result".into())?;
        let rep = verify(&g, &p, b, StabilityConcept::NS_STAR).unwrap();
        ensure(rep.stable, || format!("fixed point {p} not NS* for {b}"))?;
        total_steps += run.steps;

        let best = max_welfare_partition(&g, b, EnumerationBudget::default())
            .map_err(|e| e.to_string())?
            .ok_or("no partition")?;
        ensure(verify(&g, &best, b, StabilityConcept::NS_STAR).unwrap().stable, || {
            format!("max welfare {best} not NS* on a symmetric game")
        })?;
    }
    for _ in 0..GAMES {
        let n = r.gen_range(1..=8);
        let g = random_game(&mut r, n, &values, false);
        let b = random_bounds(&mut r, n);
        let best = max_welfare_partition(&g, b, EnumerationBudget::default())
            .map_err(|e| e.to_string())?
            .ok_or("no partition")?;
        ensure(verify(&g, &best, b, StabilityConcept::CIS_STAR).unwrap().stable, || {
            format!("max welfare {best} not CIS* for {b}")
        })?;
    }
    Ok(format!("{GAMES} symmetric runs, {total_steps} steps; max welfare NS*/CIS* on {GAMES} games each"))
}

fn criterion_7() -> Outcome {
    const TRIPLES: usize = 1000;
    let values: Vec<i64> = (-3..=3).collect();
    let mut r = rng(7);
    let mut unstable = [0usize; 8];
    for _ in 0..TRIPLES {
        let n = r.gen_range(1..=8);
        let symmetric = r.gen_bool(0.3);
        let g = random_game(&mut r, n, &values, symmetric);
        let b = random_bounds(&mut r, n);
        let p = random_partition(&mut r, n, b);
        let v = verify_all(&g, &p, b).map_err(|e| e.to_string())?;
        let idx = |c: StabilityConcept| StabilityConcept::ALL.iter().position(|&x| x == c).unwrap();
        for (from, to) in StabilityConcept::IMPLICATIONS {
            ensure(!v[idx(from)] || v[idx(to)], || format!("{from} holds but {to} fails for {p} {b} on {g:?}"))?;
        }
        for (u, s) in unstable.iter_mut().zip(v) {
            *u += usize::from(!s);
        }
    }
    ensure(unstable.iter().all(|&u| u > 0), || "some concept never failed; sample too weak".into())?;
    Ok(format!("{TRIPLES} triples, 12 arrows hold"))
}

fn sample_x3c() -> X3CInstance {
    // S = {1,2,3}, T = {2,3,4}, U = {4,5,6}
    X3CInstance::new(6, [[0, 1, 2], [1, 2, 3], [3, 4, 5]]).unwrap()
}

fn sample_mmm() -> MMMInstance {
    let e = [(1, 1), (2, 1), (2, 2), (2, 3), (3, 3), (4, 3), (4, 4)];
    MMMInstance::new(4, e.iter().map(|&(a, b)| (a - 1, 4 + b - 1)), 2).unwrap()
}

fn criterion_8() -> Outcome {
    let rg = x3c_to_cns::<i64>(&sample_x3c(), 3).map_err(|e| e.to_string())?;
    ensure(rg.game.n() == 78, || format!("{} agents, expected 78", rg.game.n()))?;
    let p = witness_partition(&rg, &Certificate::Cover(vec![0, 2])).map_err(|e| e.to_string())?;
    ensure(verify(&rg.game, &p, sb(1, 3), StabilityConcept::CNS).unwrap().stable, || "CNS witness rejected".into())?;

    let rg = mmm_to_ns_is::<i64>(&sample_mmm(), 2).map_err(|e| e.to_string())?;
    ensure(rg.game.n() == 18, || format!("{} agents, expected 18", rg.game.n()))?;
    // {a2, b1}, {a4, b3}
    let p = witness_partition(&rg, &Certificate::Matching(vec![(1, 4), (3, 6)])).map_err(|e| e.to_string())?;
    for c in [StabilityConcept::NS, StabilityConcept::IS] {
        ensure(verify(&rg.game, &p, sb(1, 2), c).unwrap().stable, || format!("{c} witness rejected"))?;
    }

    let rg = x3c_to_ns_bounded::<i64>(&sample_x3c(), sb(2, 4)).map_err(|e| e.to_string())?;
    ensure(rg.game.n() == 21, || format!("{} agents, expected 21", rg.game.n()))?;
    let p = witness_partition(&rg, &Certificate::Cover(vec![0, 2])).map_err(|e| e.to_string())?;
    ensure(verify(&rg.game, &p, sb(2, 4), StabilityConcept::NS).unwrap().stable, || "NS witness rejected".into())?;
    Ok("78-agent CNS, 18-agent NS+IS and 21-agent NS witnesses verified".into())
}

fn criterion_9() -> Outcome {
    let budget = EnumerationBudget::with_max_agents(40);
    let mut cases = 0;
    for sets in [vec![], vec![[0, 1, 2]]] {
        let inst = X3CInstance::new(3, sets).unwrap();
        let rg = x3c_to_cns::<i64>(&inst, 3).unwrap();
        let found = exists_stable(&rg.game, rg.bounds(), StabilityConcept::CNS, budget).map_err(|e| e.to_string())?;
        let yes = find_exact_cover(&inst).is_some();
        ensure(found.is_some() == yes, || format!("X3C {inst:?}: source {yes}, reduced game {}", found.is_some()))?;
        cases += 1;
    }
    for n in 1..=2usize {
        let all: Vec<(usize, usize)> = (0..n).flat_map(|a| (n..2 * n).map(move |b| (a, b))).collect();
        for mask in 0u32..1 << all.len() {
            let edges: Vec<(usize, usize)> =
                (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect();
            for k in 1..=n {
                let inst = MMMInstance::new(n, edges.clone(), k).unwrap();
                let yes = find_small_maximal_matching(&inst).is_some();
                let rg = mmm_to_ns_is::<i64>(&inst, 2).unwrap();
                for c in [StabilityConcept::NS, StabilityConcept::IS] {
                    let found = exists_stable(&rg.game, rg.bounds(), c, budget).map_err(|e| e.to_string())?;
                    ensure(found.is_some() == yes, || {
                        format!("MMM {inst:?} {c}: source {yes}, reduced game {}", found.is_some())
                    })?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} source/reduced verdict pairs agree"))
}

fn main() {
    let criteria: [(fn() -> Outcome, Duration); 9] = [
        (criterion_1, Duration::from_secs(60)),
        (criterion_2, Duration::from_secs(10)),
        (criterion_3, Duration::from_secs(60)),
        (criterion_4, Duration::from_secs(300)),
        (criterion_5, Duration::from_secs(10)),
        (criterion_6, Duration::from_secs(300)),
        (criterion_7, Duration::from_secs(120)),
        (criterion_8, Duration::from_secs(10)),
        (criterion_9, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > *limit => Err(format!("{msg}, but took {took:.1?} (limit {limit:?})")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("criterion {}: PASS ({took:.2?}) {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL ({took:.2?}) {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

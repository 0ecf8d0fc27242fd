//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::time::{Duration, Instant};

use og4_core::classifier::{
    classify, expected_h_minimal_normals, check_profile, order_two_checks, sweep, Mode,
    SweepOptions,
};
use og4_core::families::{
    dihedral_times_cyclic, dihedral_times_dihedral, gamma_plus, h_group, make_pair, FamilyId,
    Layout, Letter, VertexSet, Word,
};
use og4_core::graph::DegeneracyClass;
use og4_core::quotient::{normal_quotient, stabilizer_kernel_relation, verify_og4, Orientation};

const GRID: u32 = 16;
const SWEEP_BUDGET: Duration = Duration::from_secs(300);

type Outcome = Result<String, String>;

fn is_prime_order(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn theorem_sweep() -> Outcome {
    let start = Instant::now();
    let rep = sweep(GRID, GRID, SweepOptions::default());
    let elapsed = start.elapsed();
    check(rep.skipped == 0, || format!("{} cells skipped", rep.skipped))?;
    check(rep.mismatches.is_empty(), || format!("mismatches: {:?}", rep.mismatches))?;
    let cases = [
        (FamilyId::GammaG, 3, 5, true),
        (FamilyId::GammaG, 4, 7, true),
        (FamilyId::GammaPlusGPlus, 4, 4, true),
        (FamilyId::GammaPlusHPlus, 6, 10, true),
        (FamilyId::Gamma2G2, 3, 3, true),
        (FamilyId::GammaG, 9, 5, false),
        (FamilyId::GammaPlusGPlus, 6, 10, false),
        (FamilyId::Gamma2G2, 15, 7, false),
    ];
    for (f, r, s, want) in cases {
        let cell = rep
            .cells
            .iter()
            .find(|c| c.family == f && c.r == r && c.s == s)
            .ok_or_else(|| format!("{f} ({r},{s}) missing"))?;
        check(cell.computed == Some(want), || format!("{f} ({r},{s}) computed {:?}", cell.computed))?;
    }
    check(elapsed < SWEEP_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} cells, 0 mismatches, named cells as expected, {:.1}s",
        rep.cells.len(),
        elapsed.as_secs_f64()
    ))
}

fn og4_membership() -> Outcome {
    let cells = common::grid_cells(GRID, GRID);
    for &(f, r, s) in &cells {
        let fp = make_pair(f, r, s).map_err(|e| e.to_string())?;
        let pair = verify_og4(fp.graph(), fp.group()).map_err(|e| format!("{f} ({r},{s}): {e}"))?;
        let facts = pair.facts;
        check(
            facts.connected
                && facts.valency == Some(4)
                && facts.vertex_orbits == 1
                && facts.edge_orbits == 1
                && facts.arc_orbits == 2
                && facts.stabilizer_order == 2,
            || format!("{f} ({r},{s}): {facts:?}"),
        )?;
    }
    Ok(format!("{} pairs, stabilizer order 2 throughout", cells.len()))
}

fn lemma_direct_products() -> Outcome {
    let mut groups = 0;
    for r in 3..=12u32 {
        for s in 3..=12u32 {
            for (label, grid) in [
                ("DxC", dihedral_times_cyclic(r, s)),
                ("DxD", dihedral_times_dihedral(r, s)),
            ] {
                let grid = grid.map_err(|e| e.to_string())?;
                let g = &grid.group;
                let fast = g.minimal_normal_subgroups();
                let brute = common::minimal_normal_subgroups(g.generators());
                check(common::as_sets(&fast) == brute, || {
                    format!("{label}({r},{s}): fast path differs from enumeration")
                })?;
                let h = &grid.named_subgroup("H").map_err(|e| e.to_string())?.subgroup;
                let k = &grid.named_subgroup("K").map_err(|e| e.to_string())?.subgroup;
                let centre = g.center();
                for m in &fast {
                    let n = m.order();
                    let in_h = m.is_subgroup_of(h) && is_prime_order(n) && r as usize % n == 0;
                    let in_k = m.is_subgroup_of(k) && is_prime_order(n) && s as usize % n == 0;
                    let central = r % 2 == 0 && s % 2 == 0 && n == 2 && m.is_subgroup_of(&centre);
                    check(in_h || in_k || central, || {
                        format!("{label}({r},{s}): minimal normal of order {n} fits no case")
                    })?;
                }
                groups += 1;
            }
        }
    }
    Ok(format!("{groups} groups, fast path equals enumeration, trichotomy holds"))
}

fn h_profiles() -> Outcome {
    for (r, s, count) in [(3, 4, 2), (3, 10, 2), (6, 10, 3), (6, 4, 4), (4, 6, 2)] {
        let grid = h_group(r, s).map_err(|e| e.to_string())?;
        let want = expected_h_minimal_normals(r, s).ok_or("no profile")?;
        let prof = check_profile(&grid, Some(&want)).map_err(|e| e.to_string())?;
        check(prof.matches == Some(true) && prof.found.len() == count, || {
            format!("H({r},{s}): found {:?}, expected {:?}", prof.found, prof.expected)
        })?;
    }
    Ok("H(3,4) H(3,10) H(6,10) H(6,4) H(4,6) match".into())
}

fn orientations() -> Outcome {
    let cells = common::grid_cells(GRID, GRID);
    for &(f, r, s) in &cells {
        let fp = make_pair(f, r, s).map_err(|e| e.to_string())?;
        let pair = verify_og4(fp.graph(), fp.group()).map_err(|e| e.to_string())?;
        let [m_word, n_word] = f.distinguished_normal_subgroups();
        let want_m = if f.mu_side_oriented() { Orientation::Oriented } else { Orientation::Unoriented };
        for (w, want) in [(m_word, want_m), (n_word, Orientation::Unoriented)] {
            let h = fp.grid.subgroup_of_words(&[w.clone()]).map_err(|e| e.to_string())?;
            let q = normal_quotient(&pair, &h).map_err(|e| format!("{f} ({r},{s}) <{w}>: {e}"))?;
            check(q.orientation == want, || {
                format!("{f} ({r},{s}) <{w}>: {:?}, expected {want:?}", q.orientation)
            })?;
        }
        if f == FamilyId::GammaH {
            let n = &fp.named_subgroup("N#").map_err(|e| e.to_string())?.subgroup;
            let q = normal_quotient(&pair, n).map_err(|e| e.to_string())?;
            check(q.orientation == Orientation::Unoriented, || format!("{f} ({r},{s}) N#"))?;
        }
    }
    Ok(format!("{} pairs, all tags as tabulated", cells.len()))
}

fn k44() -> Outcome {
    let g = gamma_plus(4, 4).map_err(|e| e.to_string())?.graph;
    let side = g.bipartition().ok_or("not bipartite")?;
    let (a, b): (Vec<usize>, Vec<usize>) = (0..8).partition(|&v| side[v] == 0);
    check(a.len() == 4 && b.len() == 4, || format!("parts {} and {}", a.len(), b.len()))?;
    check(a.iter().all(|&u| b.iter().all(|&v| g.has_edge(u, v))), || "missing cross edge".into())?;
    check(g.edge_count() == 16, || format!("{} edges", g.edge_count()))?;
    Ok("bipartite 4+4, all 16 cross edges present".into())
}

fn property_suites() -> Outcome {
    let mut quotients = 0;
    let mut nested = 0;
    for (f, r, s) in common::grid_cells(GRID, GRID) {
        let ctx = format!("{f} ({r},{s})");
        let fp = make_pair(f, r, s).map_err(|e| e.to_string())?;
        let pair = verify_og4(fp.graph(), fp.group()).map_err(|e| e.to_string())?;
        let ex = classify(&pair, Mode::Exhaustive).map_err(|e| format!("{ctx}: {e}"))?;
        let fast = classify(&pair, Mode::Fast).map_err(|e| format!("{ctx}: {e}"))?;
        check(ex.is_basic == fast.is_basic && ex.basic_type == fast.basic_type, || {
            format!("{ctx}: exhaustive {:?} vs fast {:?}", ex.basic_type, fast.basic_type)
        })?;
        for q in &ex.quotients {
            quotients += 1;
            if q.degeneracy == DegeneracyClass::NonDegenerate {
                check(q.quotient_in_og4 == Some(true), || format!("{ctx}: quotient outside OG(4)"))?;
            }
            check(q.kernel.orbits() == q.partition, || format!("{ctx}: kernel orbits differ"))?;
            if let Some(len) = q.degeneracy.cycle_length() {
                let k = q.induced_group_order;
                check(k == len || k == 2 * len, || format!("{ctx}: induced order {k} on C_{len}"))?;
                let rel = stabilizer_kernel_relation(&pair, q).ok_or("no relation record")?;
                check(rel.holds, || format!("{ctx}: stabilizer-kernel relation fails"))?;
            }
        }
        for a in &ex.quotients {
            for b in &ex.quotients {
                if a.normal != b.normal && a.normal.is_subgroup_of(&b.normal) {
                    nested += 1;
                    check(!a.degeneracy.is_degenerate() || b.degeneracy.is_degenerate(), || {
                        format!("{ctx}: monotonicity fails")
                    })?;
                }
            }
        }
        let layout = if f == FamilyId::Gamma2G2 { Layout::DoubleGrid } else { Layout::Grid };
        let v = VertexSet::new(layout, r, s);
        let [mu, nu, sigma, tau] = [Letter::Mu, Letter::Nu, Letter::Sigma, Letter::Tau]
            .map(|l| v.realize(&Word::letter(l).affine(f.sigma_kind())).expect("letter"));
        let (mu_s, nu_s) = if f == FamilyId::Gamma2G2 {
            (mu.clone(), nu.inverse())
        } else {
            (mu.inverse(), nu.clone())
        };
        check(
            &mu * &nu == &nu * &mu
                && mu.conjugate_by(&tau) == mu.inverse()
                && nu.conjugate_by(&tau) == nu.inverse()
                && mu.conjugate_by(&sigma) == mu_s
                && nu.conjugate_by(&sigma) == nu_s,
            || format!("{ctx}: generator relations fail"),
        )?;
    }
    Ok(format!(
        "{quotients} quotients, {nested} nested pairs, modes agree, relations hold"
    ))
}

fn order_two_subgroups() -> Outcome {
    let mut seen = 0;
    for (f, r, s) in common::grid_cells(GRID, GRID) {
        if f == FamilyId::Gamma2G2 {
            continue;
        }
        let fp = make_pair(f, r, s).map_err(|e| e.to_string())?;
        let pair = verify_og4(fp.graph(), fp.group()).map_err(|e| e.to_string())?;
        if !classify(&pair, Mode::Fast).map_err(|e| e.to_string())?.is_basic {
            continue;
        }
        for c in order_two_checks(&fp.grid) {
            seen += 1;
            check(c.swap_ok && c.r_or_s_is_four, || {
                format!("{f} ({r},{s}): <{}> sends (0,0) to {}", c.generator, c.image_of_origin)
            })?;
        }
    }
    check(seen > 0, || "no order-two normal subgroups found".into())?;
    Ok(format!("{seen} order-two normal subgroups checked"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("classification sweep 3..16", theorem_sweep),
        ("OG(4) membership and stabilizer order", og4_membership),
        ("minimal normals of D_r x C_s and D_r x D_s", lemma_direct_products),
        ("minimal normal profiles of H(r,s)", h_profiles),
        ("orientation of named quotients", orientations),
        ("parity graph (4,4) is K_4,4", k44),
        ("property suites over the grid", property_suites),
        ("order-two normal subgroups", order_two_subgroups),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({detail})", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({detail})", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

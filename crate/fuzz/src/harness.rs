// Shared by the fuzz targets and by the seed replay test in crates/core.
// Every entry point may reject its input but must not panic.

use std::sync::Arc;

use qrecon_core::document::parse_context_str;
use qrecon_core::group::{generate_permutation_group, standard_group, FiniteGroup, GroupAction, StandardKind};
use qrecon_core::report::VerificationReport;
use qrecon_core::spin::{build_spin, parse_spin};
use qrecon_core::verify::{run_verify, Settings};

/// Largest point set decoded from raw bytes.
const MAX_POINTS: usize = 8;
const ORDER_BOUND: usize = 256;

pub fn parse_context(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = parse_context_str(text) else { return };
    if doc.phi_space.size > MAX_POINTS {
        return;
    }
    let mut settings = Settings::from_document(&doc);
    settings.max_order = settings.max_order.min(ORDER_BOUND);
    let report = run_verify(&doc, settings);
    let json = report.to_json();
    assert_eq!(VerificationReport::from_json(&json).expect("own output parses"), report);
    let _ = report.to_text();
}

pub fn parse_report(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(report) = VerificationReport::from_json(text) {
        let _ = report.to_text();
        let _ = report.exit_code();
    }
}

pub fn parse_spin_text(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(two_r) = parse_spin(text) {
        assert!(two_r >= 0);
        if two_r <= 8 {
            build_spin(two_r).expect("parsed spins build");
        }
    }
}

/// `[n, t_00, t_01, ...]` read as an n x n Cayley table, entries mod n.
pub fn build_group(data: &[u8]) {
    let Some((&n, rest)) = data.split_first() else { return };
    let n = (n as usize % MAX_POINTS) + 1;
    if rest.len() < n * n {
        return;
    }
    let table: Vec<Vec<usize>> = rest[..n * n].chunks(n).map(|r| r.iter().map(|&x| x as usize % n).collect()).collect();
    if let Ok(g) = FiniteGroup::from_cayley(&table) {
        assert_eq!(g.cayley(), table);
        for a in g.elements() {
            assert_eq!(g.mul(a, g.inv(a)), g.identity());
        }
    }
}

/// `[kind, n, m, images...]`: a catalogue group acting on `m` points, one
/// row of images per element, read mod 256 (out-of-range images rejected).
pub fn build_action(data: &[u8]) {
    let [kind, n, m, rest @ ..] = data else { return };
    let kind = match kind % 3 {
        0 => StandardKind::Cyclic,
        1 => StandardKind::Dihedral,
        _ => StandardKind::Symmetric,
    };
    let n = (*n as usize % 4) + 1;
    let m = (*m as usize % MAX_POINTS) + 1;
    let Ok(group) = standard_group(kind, n, ORDER_BOUND) else { return };
    let order = group.order();
    if rest.len() < order * m {
        return;
    }
    let perms: Vec<Vec<usize>> = rest[..order * m].chunks(m).map(|r| r.iter().map(|&x| x as usize).collect()).collect();
    if let Ok(action) = GroupAction::new(Arc::new(group), &perms) {
        let orbit_total: usize = action.orbits().blocks().iter().map(|b| b.len()).sum();
        assert_eq!(orbit_total, m);
        for x in 0..m {
            assert_eq!(action.orbit(x).len() * action.isotropy_subgroup(x).order(), order);
        }
    }
}

/// `[m, g, images...]`: `g` generators on `m` points.
pub fn generate_group(data: &[u8]) {
    let [m, g, rest @ ..] = data else { return };
    let m = (*m as usize % MAX_POINTS) + 1;
    let g = *g as usize % 4;
    if rest.len() < g * m {
        return;
    }
    let gens: Vec<Vec<usize>> = rest[..g * m].chunks(m).map(|r| r.iter().map(|&x| x as usize).collect()).collect();
    if let Ok(k) = generate_permutation_group(m, &gens, ORDER_BOUND) {
        for (i, gen) in gens.iter().enumerate() {
            assert_eq!(k.action.permutation(k.generators[i]), gen.as_slice());
        }
        for e in k.group.elements() {
            let word = &k.words[e];
            assert_eq!(k.group.product(&word.iter().map(|&s| k.generators[s]).collect::<Vec<_>>()), e);
        }
    }
}

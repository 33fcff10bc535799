//! Machine-readable analysis reports with point names in place of indices.

use serde_json::{json, Value};

use crate::balls::{gamma_is_tree, GammaGraph};
use crate::characterize::{
    balls_are_stars, diametrical_edge_bound, distinct_weight_spanning_star, hamiltonian_cycle_check,
    hamiltonian_decreasing_path, star_determination_check,
};
use crate::error::Result;
use crate::io::tree_to_value;
use crate::isometry::Isometry;
use crate::rigidity::{isometry_group, is_max_rigid, RigidityReport};
use crate::space::Space;
use crate::tree::ReprTree;

fn names(space: &Space, points: &[usize]) -> Vec<String> {
    points.iter().map(|&p| space.name(p).to_string()).collect()
}

pub fn validation_value(space: &Space) -> Value {
    let v = space.validate();
    json!({
        "kind": v.kind,
        "witness": v.witness.map(|(x, y, z)| names(space, &[x, y, z])),
        "violations": v.violations.len(),
    })
}

pub fn spectrum_value(space: &Space) -> Value {
    json!(space.spectrum().iter().map(ToString::to_string).collect::<Vec<_>>())
}

pub fn isometry_value(space: &Space, g: &Isometry) -> Value {
    let map: serde_json::Map<String, Value> = (0..g.len())
        .map(|i| (space.name(i).to_string(), json!(space.name(g.apply(i)))))
        .collect();
    json!({
        "cycles": g.display_with(space),
        "fixed_points": names(space, &g.fixed_points()),
        "map": map,
    })
}

pub fn gamma_value(space: &Space) -> Result<Value> {
    let stats = gamma_is_tree(space)?;
    let gamma = GammaGraph::new(space);
    Ok(json!({
        "vertices": stats.vertices,
        "edges": stats.edges,
        "is_tree": stats.is_tree,
        "connected": gamma.is_connected(),
        "balls": gamma.balls.iter().map(|b| names(space, b.members())).collect::<Vec<_>>(),
    }))
}

pub fn iso_value(space: &Space) -> Result<Value> {
    let group = isometry_group(space)?;
    Ok(json!({
        "order": group.order.to_string(),
        "generators": group.generators.iter().map(|g| g.display_with(space)).collect::<Vec<_>>(),
        "orbits": group.orbits.iter().map(|o| names(space, o)).collect::<Vec<_>>(),
        "elements": group.full_list.as_ref().map(|l| l.iter().map(|g| g.display_with(space)).collect::<Vec<_>>()),
    }))
}

pub fn rigidity_value(space: &Space, report: &RigidityReport) -> Value {
    json!({
        "points": report.points,
        "iso_order": report.iso_order.to_string(),
        "min_fix": report.min_fix,
        "in_r": report.in_r,
        "criteria": {
            "min_fix_is_n_minus_2": {
                "holds": report.min_fix_criterion.holds,
                "witness": isometry_value(space, &report.min_fix_criterion.certificate),
            },
            "order_is_2": {
                "holds": report.order_criterion.holds,
                "order": report.order_criterion.certificate.to_string(),
            },
            "tree_is_binary_chain": {
                "holds": report.shape_criterion.holds,
                "violating_node": report.shape_criterion.certificate,
            },
        },
    })
}

/// The graph certificates of maximal rigidity, each with its witness.
pub fn certificates_value(space: &Space) -> Result<Value> {
    let stars = balls_are_stars(space)?;
    let bound = diametrical_edge_bound(space)?;
    let path = hamiltonian_decreasing_path(space)?;
    let star = distinct_weight_spanning_star(space)?;
    let cycle = if space.len() >= 3 {
        hamiltonian_cycle_check(space)?
    } else {
        None
    };
    Ok(json!({
        "balls_are_stars": {
            "holds": stars.holds,
            "violation": stars.violation.map(|b| names(space, b.members())),
        },
        "diametrical_edges": bound,
        "decreasing_hamiltonian_path": path.map(|p| json!({
            "points": names(space, &p.points),
            "weights": p.weights.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })),
        "distinct_weight_star": star.map(|s| json!({
            "center": space.name(s.center),
            "rays": s.rays.iter().map(|&(p, w)| json!([space.name(p), w.to_string()])).collect::<Vec<_>>(),
        })),
        "hamiltonian_cycle": cycle.map(|c| json!({
            "points": names(space, &c.points),
            "weights": c.weights.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })),
        "star_determines_space": star_determination_check(space)?,
    }))
}

/// Everything the library can say about one space. Sections that need an
/// ultrametric (or at least two points) are `null` otherwise.
pub fn analysis_report(space: &Space) -> Result<Value> {
    let ultra = space.is_ultrametric();
    let tree = if ultra {
        Some(tree_to_value(&ReprTree::build(space)?))
    } else {
        None
    };
    let rich = ultra && space.len() >= 2;
    Ok(json!({
        "points": space.names(),
        "validation": validation_value(space),
        "spectrum": spectrum_value(space),
        "gomory_hu": if ultra { Some(space.gomory_hu_check()?) } else { None },
        "tree": tree,
        "gamma": gamma_value(space)?,
        "iso": if ultra { Some(iso_value(space)?) } else { None },
        "rigidity": if rich { Some(rigidity_value(space, &is_max_rigid(space)?)) } else { None },
        "certificates": if rich { Some(certificates_value(space)?) } else { None },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn r4_report() {
        let r = analysis_report(&r4()).unwrap();
        assert_eq!(r["validation"]["kind"], "Ultrametric");
        assert_eq!(r["rigidity"]["in_r"], true);
        assert_eq!(r["iso"]["order"], "2");
        assert_eq!(r["certificates"]["distinct_weight_star"]["center"], "p4");
        assert_eq!(r["gamma"]["vertices"], 7);
    }

    #[test]
    fn nu3_report_skips_tree_sections() {
        let r = analysis_report(&nu3()).unwrap();
        assert_eq!(r["validation"]["kind"], "Metric");
        assert_eq!(r["validation"]["witness"], json!(["x1", "x2", "x3"]));
        assert!(r["tree"].is_null() && r["rigidity"].is_null());
        assert_eq!(r["gamma"]["is_tree"], false);
    }
}

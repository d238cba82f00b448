//! Brute-force cost reference written directly from the cost definitions,
//! sharing no code with the library's cost module. Only plain data is read
//! from the scenario.

use thetaform_core::{Point3, Scenario};

#[derive(Debug, Clone, Copy)]
pub struct OracleCost {
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
    pub total: f64,
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    s.sqrt()
}

pub fn cost(waypoints: &[Point3], scenario: &Scenario) -> OracleCost {
    let pts: Vec<[f64; 3]> = waypoints.iter().map(|p| [p.x, p.y, p.z]).collect();
    let m = pts.len() - 1;

    let mut j1 = 0.0;
    for l in 0..m {
        j1 += dist(pts[l], pts[l + 1]);
    }

    // Formation radius: largest offset length.
    let mut r_f: f64 = 0.0;
    for o in scenario.formation.offsets() {
        r_f = r_f.max(dist([o.x, o.y, o.z], [0.0, 0.0, 0.0]));
    }
    let r_q = scenario.formation.quad_radius();
    let k_count = scenario.obstacles.len();
    let mut j2 = 0.0;
    if k_count > 0 {
        for l in 0..m {
            let mid = [
                (pts[l][0] + pts[l + 1][0]) / 2.0,
                (pts[l][1] + pts[l + 1][1]) / 2.0,
                (pts[l][2] + pts[l + 1][2]) / 2.0,
            ];
            let mut v_l = 0.0;
            for obs in &scenario.obstacles {
                let c = [obs.center.x, obs.center.y, obs.center.z];
                let top = c[2] + obs.height();
                let probe = if mid[2] < top { mid[2] } else { top };
                let d_s = (obs.radius() * obs.radius() + (probe - c[2]) * (probe - c[2])).sqrt();
                let r_s = r_q + r_f + d_s;
                let v = 1.0 - dist(mid, c) / r_s;
                if v > 0.0 {
                    v_l += v;
                }
            }
            j2 += v_l / k_count as f64;
        }
        j2 /= m as f64;
    }

    let (lo, hi) = (scenario.altitude.min, scenario.altitude.max);
    let mut j3 = 0.0;
    for p in &pts[1..m] {
        let z = p[2];
        if z <= 0.0 {
            j3 = f64::INFINITY;
        } else if z > hi {
            j3 += z - hi;
        } else if z < lo {
            j3 += lo - z;
        }
    }

    let w = scenario.weights;
    let total = if j3.is_infinite() {
        f64::INFINITY
    } else {
        w.length * j1 + w.violation * j2 + w.altitude * j3
    };
    OracleCost { j1, j2, j3, total }
}

/// Relative agreement; exact agreement required when either side is zero
/// or infinite.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    if a == b {
        return true;
    }
    if a == 0.0 || b == 0.0 || !a.is_finite() || !b.is_finite() {
        return false;
    }
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

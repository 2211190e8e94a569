use alloc::vec::Vec;

/// Hypervolume together with the number of points that had to be clamped
/// onto the reference point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HypervolumeResult {
    pub value: f64,
    pub clamped: usize,
}

/// Maps integer objective vectors onto `[0, 1]` via `(z - min) / (max - min)`.
/// A zero-range objective maps to 1 for values at or above its minimum and
/// 0 below it, so constant objectives do not collapse the volume.
pub fn normalize<V: AsRef<[i64]>>(points: &[V], z_min: &[i64], z_max: &[i64]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|p| {
            p.as_ref()
                .iter()
                .zip(z_min.iter().zip(z_max))
                .map(|(&z, (&lo, &hi))| {
                    if hi > lo {
                        ((z - lo) as f64 / (hi - lo) as f64).clamp(0.0, 1.0)
                    } else if z >= lo {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

/// Exact measure of the union of boxes `[reference, p]` (maximisation) by
/// recursive slicing along the last objective. Points below the reference in
/// some coordinate contribute nothing and are counted in `clamped`.
pub fn hypervolume(front: &[Vec<f64>], reference: &[f64]) -> HypervolumeResult {
    let mut clamped = 0;
    let mut pts: Vec<&[f64]> = Vec::with_capacity(front.len());
    for p in front {
        assert_eq!(p.len(), reference.len(), "point and reference dimensions differ");
        if p.iter().zip(reference).any(|(x, r)| x < r) {
            clamped += 1;
            continue;
        }
        pts.push(p);
    }
    if clamped > 0 {
        log::warn!("{clamped} point(s) below the hypervolume reference were clamped");
    }
    let value = if reference.is_empty() { 0.0 } else { slice_volume(pts, reference, reference.len()) };
    HypervolumeResult { value, clamped }
}

fn slice_volume(mut pts: Vec<&[f64]>, reference: &[f64], dim: usize) -> f64 {
    if pts.is_empty() {
        return 0.0;
    }
    match dim {
        1 => pts.iter().map(|p| p[0]).fold(reference[0], f64::max) - reference[0],
        2 => {
            pts.sort_by(|a, b| b[0].total_cmp(&a[0]));
            let mut area = 0.0;
            let mut top = reference[1];
            for k in 0..pts.len() {
                top = top.max(pts[k][1]);
                let next = pts.get(k + 1).map_or(reference[0], |p| p[0]);
                area += (pts[k][0] - next) * (top - reference[1]);
            }
            area
        }
        _ => {
            let last = dim - 1;
            pts.sort_by(|a, b| b[last].total_cmp(&a[last]));
            let mut volume = 0.0;
            let mut active: Vec<&[f64]> = Vec::with_capacity(pts.len());
            for k in 0..pts.len() {
                let p = pts[k];
                // drop points whose projection is covered by the newcomer, skip covered newcomers
                if !active.iter().any(|q| (0..last).all(|m| q[m] >= p[m])) {
                    active.retain(|q| !(0..last).all(|m| p[m] >= q[m]));
                    active.push(p);
                }
                let next = pts.get(k + 1).map_or(reference[last], |q| q[last]);
                let thickness = p[last] - next;
                if thickness > 0.0 {
                    volume += thickness * slice_volume(active.clone(), reference, last);
                }
            }
            volume
        }
    }
}

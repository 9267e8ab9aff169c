//! Sample grids on a chart.

/// Axis-aligned lattice with `per_axis` points per axis in `[min, max]`,
/// ordered lexicographically by axis index.
pub fn lattice_points(dim: usize, per_axis: usize, min: f64, max: f64) -> Vec<Vec<f64>> {
    assert!(per_axis >= 1);
    let coords: Vec<f64> = if per_axis == 1 {
        vec![(min + max) / 2.0]
    } else {
        (0..per_axis)
            .map(|i| min + (max - min) * i as f64 / (per_axis - 1) as f64)
            .collect()
    };
    let mut points = vec![vec![]];
    for _ in 0..dim {
        let mut next = Vec::with_capacity(points.len() * coords.len());
        for p in &points {
            for c in &coords {
                let mut q = p.clone();
                q.push(*c);
                next.push(q);
            }
        }
        points = next;
    }
    points
}

/// The default grid: three points per axis in `[−1, 1]`.
pub fn default_lattice(dim: usize) -> Vec<Vec<f64>> {
    lattice_points(dim, 3, -1.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_counts_and_order() {
        let pts = lattice_points(2, 3, -1.0, 1.0);
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], vec![-1.0, -1.0]);
        assert_eq!(pts[1], vec![-1.0, 0.0]);
        assert_eq!(pts[8], vec![1.0, 1.0]);
    }

    #[test]
    fn single_point_lattice_is_midpoint() {
        let pts = lattice_points(3, 1, -1.0, 1.0);
        assert_eq!(pts, vec![vec![0.0, 0.0, 0.0]]);
    }
}

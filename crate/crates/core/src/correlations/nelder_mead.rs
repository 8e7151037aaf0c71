//! Unconstrained Nelder-Mead simplex minimization in two dimensions.

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    /// Stop once `max f - min f` over the simplex falls below this.
    pub value_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead {
            value_tolerance: 1e-9,
            max_iterations: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Minimum {
    pub x: [f64; 2],
    pub value: f64,
    pub iterations: usize,
}

fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

impl NelderMead {
    /// Minimizes `f` from an axis-aligned initial simplex at `x0` with edge lengths `step`.
    pub fn minimize(
        &self,
        mut f: impl FnMut([f64; 2]) -> f64,
        x0: [f64; 2],
        step: [f64; 2],
    ) -> Minimum {
        let mut simplex = [x0, [x0[0] + step[0], x0[1]], [x0[0], x0[1] + step[1]]];
        let mut values = simplex.map(&mut f);
        let mut iterations = 0;

        while iterations < self.max_iterations {
            let mut order = [0usize, 1, 2];
            order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
            simplex = order.map(|i| simplex[i]);
            values = order.map(|i| values[i]);
            if values[2] - values[0] < self.value_tolerance {
                break;
            }
            iterations += 1;

            let centroid = lerp(simplex[0], simplex[1], 0.5);
            let reflected = lerp(centroid, simplex[2], -REFLECT);
            let fr = f(reflected);

            if fr < values[0] {
                let expanded = lerp(centroid, simplex[2], -EXPAND);
                let fe = f(expanded);
                if fe < fr {
                    simplex[2] = expanded;
                    values[2] = fe;
                } else {
                    simplex[2] = reflected;
                    values[2] = fr;
                }
            } else if fr < values[1] {
                simplex[2] = reflected;
                values[2] = fr;
            } else {
                let (contracted, fc) = if fr < values[2] {
                    let x = lerp(centroid, reflected, CONTRACT);
                    (x, f(x))
                } else {
                    let x = lerp(centroid, simplex[2], CONTRACT);
                    (x, f(x))
                };
                if fc < values[2].min(fr) {
                    simplex[2] = contracted;
                    values[2] = fc;
                } else {
                    for k in 1..3 {
                        simplex[k] = lerp(simplex[0], simplex[k], SHRINK);
                        values[k] = f(simplex[k]);
                    }
                }
            }
        }

        let best = (0..3)
            .min_by(|&i, &j| values[i].total_cmp(&values[j]))
            .unwrap_or(0);
        Minimum {
            x: simplex[best],
            value: values[best],
            iterations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let m = NelderMead {
            value_tolerance: 1e-14,
            max_iterations: 2000,
        }
        .minimize(
            |[x, y]| (x - 1.0).powi(2) + 3.0 * (y + 0.5).powi(2) + 2.0,
            [0.0, 0.0],
            [0.1, 0.1],
        );
        assert!((m.value - 2.0).abs() < 1e-12);
        assert!((m.x[0] - 1.0).abs() < 1e-5);
        assert!((m.x[1] + 0.5).abs() < 1e-5);
    }

    #[test]
    fn rosenbrock() {
        let m = NelderMead {
            value_tolerance: 1e-16,
            max_iterations: 5000,
        }
        .minimize(
            |[x, y]| (1.0 - x).powi(2) + 100.0 * (y - x * x).powi(2),
            [-1.2, 1.0],
            [0.1, 0.1],
        );
        assert!(m.value < 1e-10, "value {}", m.value);
    }

    #[test]
    fn flat_objective_stops_immediately() {
        let m = NelderMead::default().minimize(|_| 1.0, [0.3, 0.4], [0.1, 0.1]);
        assert_eq!(m.iterations, 0);
        assert_eq!(m.value, 1.0);
    }
}

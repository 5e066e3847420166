//! Properties of a single update on random fields, in both coordinate modes.

use carbuncle::diagnostics::entropy_tolerance;
use carbuncle::gas::{GasModel, Primitive};
use carbuncle::grid::{BoundarySpec, CoordinateMode, FieldGrid, GridGeometry, SideCondition, WallKind};
use carbuncle::solver::{advance, cfl_dt, FluxKind, SchemeSpec, StepOptions};
use proptest::prelude::*;

const NX: usize = 7;
const NY: usize = 5;

fn arb_state() -> impl Strategy<Value = Primitive> {
    (0.3f64..3.0, -1.5f64..1.5, -1.5f64..1.5).prop_map(|(r, u, v)| Primitive::new(r, u, v))
}

fn arb_mode() -> impl Strategy<Value = CoordinateMode> {
    prop_oneof![Just(CoordinateMode::Standard), (0.5f64..3.0).prop_map(|t0| CoordinateMode::Similarity { t0 })]
}

fn field(states: &[Primitive], mode: CoordinateMode, y: (f64, f64)) -> FieldGrid {
    let geom = GridGeometry::new(NX, NY, (-1.0, 1.5), y).unwrap();
    let mut f = FieldGrid::uniform(geom, mode, states[0]).unwrap();
    for j in 0..NY {
        for i in 0..NX {
            f.set(i, j, states[j * NX + i].to_conservative());
        }
    }
    f
}

fn bc(left: Primitive, right: Primitive) -> BoundarySpec {
    BoundarySpec {
        left: SideCondition::Fixed(left),
        right: SideCondition::Fixed(right),
        bottom: WallKind::Wall,
        top: WallKind::Symmetry,
    }
}

fn mirrored(p: Primitive) -> Primitive {
    Primitive::new(p.rho, p.ux, -p.uy)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn conservation_positivity_entropy(
        states in prop::collection::vec(arb_state(), NX * NY),
        l in arb_state(),
        r in arb_state(),
        mode in arb_mode(),
        rusanov in any::<bool>(),
    ) {
        let gas = GasModel::default();
        let f = field(&states, mode, (0.0, 1.0));
        let b = bc(l, r);
        let scheme = SchemeSpec::new(if rusanov { FluxKind::Rusanov } else { FluxKind::Godunov });
        let dt = cfl_dt(&f, &scheme, &gas).unwrap();
        let opts = StepOptions { entropy: true, step_index: 0 };
        let (next, rep) = advance(&f, &b, None, &scheme, &gas, dt, opts).unwrap();

        let (before, after) = (f.totals(), next.totals());
        for k in 0..3 {
            let scale = before[k].abs().max(after[k].abs()).max(rep.boundary_outflow[k].abs()).max(1.0);
            prop_assert!((after[k] - before[k] + rep.boundary_outflow[k]).abs() <= 1e-13 * scale);
        }
        for (_, _, u) in next.interior() {
            prop_assert!(u.rho > 0.0 && u.is_finite());
        }
        let tol = entropy_tolerance(&f, &next, dt, &gas);
        let prod = rep.entropy_production.unwrap();
        prop_assert!(prod.iter().all(|&p| p <= tol), "max production {:e} over tol {:e}",
            prod.iter().copied().fold(f64::NEG_INFINITY, f64::max), tol);
    }

    #[test]
    fn uniform_states_are_fixed_points(u in arb_state(), mode in arb_mode()) {
        let gas = GasModel::default();
        let u = Primitive::new(u.rho, u.ux, 0.0);
        let f = FieldGrid::uniform(GridGeometry::new(NX, NY, (-1.0, 1.5), (0.0, 1.0)).unwrap(), mode, u).unwrap();
        let b = bc(u, u);
        let scheme = SchemeSpec::new(FluxKind::Godunov);
        let mut g = f.clone();
        for step in 0..20 {
            let dt = cfl_dt(&g, &scheme, &gas).unwrap();
            g = advance(&g, &b, None, &scheme, &gas, dt, StepOptions { entropy: false, step_index: step }).unwrap().0;
        }
        for ((_, _, a), (_, _, c)) in f.interior().zip(g.interior()) {
            prop_assert!((a.rho - c.rho).abs() <= 1e-13);
            prop_assert!((a.mx - c.mx).abs() <= 1e-13);
            prop_assert!(c.my.abs() <= 1e-13);
        }
    }

    /// A field mirrored about `y = 0`, with both horizontal boundaries
    /// reflecting, evolves into the mirrored result. The domain straddles
    /// zero so that similarity-mode edge speeds mirror too.
    #[test]
    fn mirror_covariance(
        states in prop::collection::vec(arb_state(), NX * NY),
        l in arb_state(),
        r in arb_state(),
        mode in arb_mode(),
    ) {
        let gas = GasModel::default();
        let l = Primitive::new(l.rho, l.ux, 0.0);
        let r = Primitive::new(r.rho, r.ux, 0.0);
        let f = field(&states, mode, (-0.5, 0.5));
        let flipped: Vec<Primitive> = (0..NY)
            .flat_map(|j| (0..NX).map(move |i| (i, NY - 1 - j)))
            .map(|(i, j)| mirrored(states[j * NX + i]))
            .collect();
        let g = field(&flipped, mode, (-0.5, 0.5));
        let b = bc(l, r);
        let scheme = SchemeSpec::new(FluxKind::Godunov);
        let dt = cfl_dt(&f, &scheme, &gas).unwrap();
        let a = advance(&f, &b, None, &scheme, &gas, dt, StepOptions::default()).unwrap().0;
        let c = advance(&g, &b, None, &scheme, &gas, dt, StepOptions::default()).unwrap().0;
        for j in 0..NY {
            for i in 0..NX {
                let (p, q) = (a.get(i, j), c.get(i, NY - 1 - j));
                prop_assert!((p.rho - q.rho).abs() <= 1e-12);
                prop_assert!((p.mx - q.mx).abs() <= 1e-12);
                prop_assert!((p.my + q.my).abs() <= 1e-12);
            }
        }
    }
}

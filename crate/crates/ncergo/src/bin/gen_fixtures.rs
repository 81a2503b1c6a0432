// Regenerates the test fixture files in canonical serialization.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_complex::Complex;

use ncergo::algebra::{AlgebraShape, Element, State};
use ncergo::dynamics::{Automorphism, GroupAction, GroupPresentation};
use ncergo::linalg::CMat;
use ncergo::sysfile::SystemFile;

type C = Complex<f64>;

fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

fn shape(dims: &[usize]) -> AlgebraShape {
    AlgebraShape::new(dims.to_vec()).unwrap()
}

fn diag_element(s: &AlgebraShape, values: &[f64]) -> Element<f64> {
    let mut idx = 0;
    let blocks = s
        .block_dims()
        .iter()
        .map(|&n| {
            let mut m = CMat::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = c(values[idx], 0.0);
                idx += 1;
            }
            m
        })
        .collect();
    Element::new(s.clone(), blocks).unwrap()
}

fn m2(entries: [[C; 2]; 2]) -> CMat<f64> {
    CMat::from_rows(entries.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn save(name: &str, file: &SystemFile) {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.push("tests/fixtures");
    std::fs::create_dir_all(&path).unwrap();
    path.push(name);
    file.save(&path).unwrap();
    println!("wrote {}", path.display());
}

fn cyclic_shift(s: &AlgebraShape, n: usize) -> Automorphism<f64> {
    let perm: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    Automorphism::new(s.clone(), perm, vec![CMat::identity(1); n]).unwrap()
}

fn main() {
    // 1. cyclic3: shift on C^3 declared over Z.
    {
        let s = shape(&[1, 1, 1]);
        let action = GroupAction::new(GroupPresentation::Z, vec![cyclic_shift(&s, 3)]).unwrap();
        let mut observables = BTreeMap::new();
        observables.insert("ind".into(), diag_element(&s, &[1.0, 0.0, 0.0]));
        observables.insert("x123".into(), diag_element(&s, &[1.0, 2.0, 3.0]));
        observables.insert("one".into(), Element::unit(&s));
        let mut states = BTreeMap::new();
        states.insert("p0".into(), State::point_mass(&s, 0).unwrap());
        states.insert("uniform".into(), State::maximally_mixed(&s));
        save(
            "cyclic3.json",
            &SystemFile::from_system(&action, &observables, &states, None),
        );
    }

    // 2. cyclic3_group: same shift declared over the cyclic group.
    {
        let s = shape(&[1, 1, 1]);
        let action = GroupAction::new(
            GroupPresentation::CyclicProduct(vec![3]),
            vec![cyclic_shift(&s, 3)],
        )
        .unwrap();
        let mut observables = BTreeMap::new();
        observables.insert("ind".into(), diag_element(&s, &[1.0, 0.0, 0.0]));
        observables.insert("x123".into(), diag_element(&s, &[1.0, 2.0, 3.0]));
        save(
            "cyclic3_group.json",
            &SystemFile::from_system(&action, &observables, &BTreeMap::new(), None),
        );
    }

    // 3. identity_c2: trivial action on C^2.
    {
        let s = shape(&[1, 1]);
        let action =
            GroupAction::new(GroupPresentation::Z, vec![Automorphism::identity(&s)]).unwrap();
        let mut observables = BTreeMap::new();
        observables.insert("d25".into(), diag_element(&s, &[2.0, 5.0]));
        observables.insert("d01".into(), diag_element(&s, &[0.0, 1.0]));
        observables.insert("neg".into(), diag_element(&s, &[1.0, -1.0]));
        observables.insert("one".into(), Element::unit(&s));
        let mut states = BTreeMap::new();
        states.insert("p0".into(), State::point_mass(&s, 0).unwrap());
        states.insert("p1".into(), State::point_mass(&s, 1).unwrap());
        save(
            "identity_c2.json",
            &SystemFile::from_system(&action, &observables, &states, None),
        );
    }

    // 4. phase_m2: conjugation by diag(1, i) on M_2.
    {
        let s = shape(&[2]);
        let u = m2([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]]);
        let action = GroupAction::new(
            GroupPresentation::Z,
            vec![Automorphism::inner(&s, vec![u]).unwrap()],
        )
        .unwrap();
        let mut observables = BTreeMap::new();
        observables.insert(
            "corr".into(),
            Element::new(
                s.clone(),
                vec![m2([[c(1.0, 0.0), c(0.5, 0.0)], [c(0.5, 0.0), c(1.0, 0.0)]])],
            )
            .unwrap(),
        );
        observables.insert("e11".into(), diag_element(&s, &[1.0, 0.0]));
        observables.insert(
            "ones".into(),
            Element::new(
                s.clone(),
                vec![m2([[c(1.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(1.0, 0.0)]])],
            )
            .unwrap(),
        );
        let mut states = BTreeMap::new();
        states.insert(
            "coherent".into(),
            State::new(
                s.clone(),
                vec![m2([[c(0.5, 0.0), c(0.5, 0.0)], [c(0.5, 0.0), c(0.5, 0.0)]])],
            )
            .unwrap(),
        );
        states.insert("mixed".into(), State::maximally_mixed(&s));
        save(
            "phase_m2.json",
            &SystemFile::from_system(&action, &observables, &states, None),
        );
    }

    // 5. golden_m2: conjugation by diag(1, e^{iθ}) with θ the golden angle.
    {
        let s = shape(&[2]);
        let theta = 2.0 * std::f64::consts::PI * (5f64.sqrt() - 1.0) / 2.0;
        let u = m2([
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(theta.cos(), theta.sin())],
        ]);
        let action = GroupAction::new(
            GroupPresentation::Z,
            vec![Automorphism::inner(&s, vec![u]).unwrap()],
        )
        .unwrap();
        let mut observables = BTreeMap::new();
        observables.insert(
            "ones".into(),
            Element::new(
                s.clone(),
                vec![m2([[c(1.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(1.0, 0.0)]])],
            )
            .unwrap(),
        );
        observables.insert("one".into(), Element::unit(&s));
        save(
            "golden_m2.json",
            &SystemFile::from_system(&action, &observables, &BTreeMap::new(), None),
        );
    }

    // 6. z2_swap: two commuting coordinate swaps of a 2x2 grid under Z².
    {
        let s = shape(&[1, 1, 1, 1]);
        let horizontal =
            Automorphism::new(s.clone(), vec![1, 0, 3, 2], vec![CMat::identity(1); 4]).unwrap();
        let vertical =
            Automorphism::new(s.clone(), vec![2, 3, 0, 1], vec![CMat::identity(1); 4]).unwrap();
        let action =
            GroupAction::new(GroupPresentation::Zd(2), vec![horizontal, vertical]).unwrap();
        let mut observables = BTreeMap::new();
        observables.insert("grid".into(), diag_element(&s, &[1.0, 2.0, 3.0, 4.0]));
        observables.insert("corner".into(), diag_element(&s, &[1.0, 0.0, 0.0, 0.0]));
        save(
            "z2_swap.json",
            &SystemFile::from_system(&action, &observables, &BTreeMap::new(), None),
        );
    }

    // 7. mixed_cyclic_m2: shift on C^3 plus a fixed M_2 block, with the M_2
    // block as the ideal.
    {
        let s = shape(&[1, 1, 1, 2]);
        let theta = Automorphism::new(
            s.clone(),
            vec![1, 2, 0, 3],
            vec![
                CMat::identity(1),
                CMat::identity(1),
                CMat::identity(1),
                CMat::identity(2),
            ],
        )
        .unwrap();
        let action = GroupAction::new(GroupPresentation::Z, vec![theta]).unwrap();
        let mut observables = BTreeMap::new();
        let mut a = Element::zero(&s);
        a.block_mut(0)[(0, 0)] = c(0.9, 0.0);
        a.block_mut(1)[(0, 0)] = c(0.1, 0.0);
        a.block_mut(2)[(0, 0)] = c(0.2, 0.0);
        a.block_mut(3)[(0, 0)] = c(0.7, 0.0);
        a.block_mut(3)[(1, 1)] = c(0.1, 0.0);
        observables.insert("a".into(), a);
        let mut ind = Element::zero(&s);
        ind.block_mut(0)[(0, 0)] = c(1.0, 0.0);
        observables.insert("cycle_ind".into(), ind);
        save(
            "mixed_cyclic_m2.json",
            &SystemFile::from_system(&action, &observables, &BTreeMap::new(), Some(vec![3])),
        );
    }

    // 8. klein_c4: the Klein four-group translating 4 coordinates.
    {
        let s = shape(&[1, 1, 1, 1]);
        let g1 =
            Automorphism::new(s.clone(), vec![1, 0, 3, 2], vec![CMat::identity(1); 4]).unwrap();
        let g2 =
            Automorphism::new(s.clone(), vec![2, 3, 0, 1], vec![CMat::identity(1); 4]).unwrap();
        let action =
            GroupAction::new(GroupPresentation::CyclicProduct(vec![2, 2]), vec![g1, g2]).unwrap();
        let mut observables = BTreeMap::new();
        observables.insert("grid".into(), diag_element(&s, &[1.0, 2.0, 3.0, 4.0]));
        save(
            "klein_c4.json",
            &SystemFile::from_system(&action, &observables, &BTreeMap::new(), None),
        );
    }

    // 9. two_orbit: a 2-cycle and a 3-cycle of coordinates under Z.
    {
        let s = shape(&[1, 1, 1, 1, 1]);
        let theta =
            Automorphism::new(s.clone(), vec![1, 0, 3, 4, 2], vec![CMat::identity(1); 5]).unwrap();
        let action = GroupAction::new(GroupPresentation::Z, vec![theta]).unwrap();
        let mut observables = BTreeMap::new();
        observables.insert(
            "orbit_a".into(),
            diag_element(&s, &[1.0, 1.0, 0.0, 0.0, 0.0]),
        );
        observables.insert(
            "orbit_b".into(),
            diag_element(&s, &[0.0, 0.0, 1.0, 1.0, 1.0]),
        );
        observables.insert("mixed".into(), diag_element(&s, &[1.0, 0.0, 0.5, 0.0, 0.0]));
        let mut states = BTreeMap::new();
        states.insert("p0".into(), State::point_mass(&s, 0).unwrap());
        states.insert("p2".into(), State::point_mass(&s, 2).unwrap());
        save(
            "two_orbit.json",
            &SystemFile::from_system(&action, &observables, &states, Some(vec![0, 1])),
        );
    }

    // 10. m2_plus_c1: trivial action on M_2 ⊕ C.
    {
        let s = shape(&[2, 1]);
        let action =
            GroupAction::new(GroupPresentation::Z, vec![Automorphism::identity(&s)]).unwrap();
        let mut observables = BTreeMap::new();
        let mut a = Element::zero(&s);
        a.block_mut(0)[(0, 0)] = c(0.9, 0.0);
        a.block_mut(0)[(1, 1)] = c(0.3, 0.0);
        a.block_mut(1)[(0, 0)] = c(0.2, 0.0);
        observables.insert("a".into(), a);
        let mut p = Element::zero(&s);
        p.block_mut(0)[(0, 0)] = c(1.0, 0.0);
        observables.insert("p".into(), p);
        let mut states = BTreeMap::new();
        states.insert("mixed".into(), State::maximally_mixed(&s));
        save(
            "m2_plus_c1.json",
            &SystemFile::from_system(&action, &observables, &states, None),
        );
    }
}

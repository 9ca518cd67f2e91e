//! Small fans used as fixtures and shipped by the gallery command.

use super::Fan;

pub fn affine_plane() -> Fan {
    Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![], vec![0], vec![1], vec![0, 1]])
}

pub fn p1() -> Fan {
    Fan::new(1, vec![vec![1], vec![-1]], vec![vec![], vec![0], vec![1]])
}

pub fn p2() -> Fan {
    Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
        vec![vec![], vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2], vec![0, 2]],
    )
}

pub fn p1xp1() -> Fan {
    Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
        vec![
            vec![],
            vec![0],
            vec![1],
            vec![2],
            vec![3],
            vec![0, 1],
            vec![1, 2],
            vec![2, 3],
            vec![0, 3],
        ],
    )
}

/// The Hirzebruch surface `F₁`.
pub fn hirzebruch_f1() -> Fan {
    Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, 1], vec![0, -1]],
        vec![
            vec![],
            vec![0],
            vec![1],
            vec![2],
            vec![3],
            vec![0, 1],
            vec![1, 2],
            vec![2, 3],
            vec![0, 3],
        ],
    )
}

/// `A¹ × 𝔾_m`: the ray `(1,0)` in `ℤ²`.
pub fn single_ray() -> Fan {
    Fan::new(2, vec![vec![1, 0]], vec![vec![], vec![0]])
}

/// Face fan of the non-unimodular cone spanned by `(1,0)` and `(1,2)`.
pub fn singular_cone() -> Fan {
    Fan::new(2, vec![vec![1, 0], vec![1, 2]], vec![vec![], vec![0], vec![1], vec![0, 1]])
}

/// The fans of the gallery, in order.
pub fn gallery() -> Vec<(&'static str, Fan)> {
    vec![
        ("a2", affine_plane()),
        ("p1", p1()),
        ("p2", p2()),
        ("p1xp1", p1xp1()),
        ("f1", hirzebruch_f1()),
    ]
}

pub fn all() -> Vec<(&'static str, Fan)> {
    let mut v = gallery();
    v.push(("single_ray", single_ray()));
    v.push(("singular_cone", singular_cone()));
    v
}

pub fn by_name(name: &str) -> Option<Fan> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, f)| f)
}

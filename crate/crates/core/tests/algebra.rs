use hcliff::clifford::{blade_product_sign, embed_vector, BladeIndex, Multivector, VectorR2n};
use hcliff::hermitean::{apply_j_vector, hermitean_vars, witt_basis};
use num_complex::Complex64;
use proptest::prelude::*;

type Matrix = Vec<Vec<Complex64>>;

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `i` times anticommuting Hermitian Pauli strings: matrices squaring to
/// `-1` that pairwise anticommute, a representation of `R_{0,m}`.
fn generators(m: usize) -> Vec<Matrix> {
    let id = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
    let x = vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]];
    let y = vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]];
    let z = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]];
    let qubits = m.div_ceil(2);
    let string = |factors: Vec<&Matrix>| {
        let mut out = factors[0].clone();
        for f in &factors[1..] {
            out = kron(&out, f);
        }
        out
    };
    (0..m)
        .map(|k| {
            let q = k / 2;
            let mut factors: Vec<&Matrix> = Vec::new();
            for p in 0..qubits {
                factors.push(match p.cmp(&q) {
                    std::cmp::Ordering::Less => &z,
                    std::cmp::Ordering::Equal => if k % 2 == 0 { &x } else { &y },
                    std::cmp::Ordering::Greater => &id,
                });
            }
            string(factors).into_iter().map(|row| row.into_iter().map(|v| v * c(0.0, 1.0)).collect()).collect()
        })
        .collect()
}

fn blade_matrix(gens: &[Matrix], blade: u16) -> Matrix {
    let n = gens[0].len();
    let mut out: Matrix = (0..n).map(|i| (0..n).map(|j| c(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect();
    for (k, g) in gens.iter().enumerate() {
        if blade & (1 << k) != 0 {
            out = matmul(&out, g);
        }
    }
    out
}

fn matrix_sign(lhs: &Matrix, rhs: &Matrix) -> Option<i8> {
    let same = lhs.iter().flatten().zip(rhs.iter().flatten()).all(|(a, b)| (a - b).norm() < 1e-12);
    let opposite = lhs.iter().flatten().zip(rhs.iter().flatten()).all(|(a, b)| (a + b).norm() < 1e-12);
    match (same, opposite) {
        (true, false) => Some(1),
        (false, true) => Some(-1),
        _ => None,
    }
}

#[test]
fn blade_signs_match_matrix_representation() {
    for m in 1..=6 {
        let gens = generators(m);
        for g in &gens {
            let sq = matmul(g, g);
            let minus_one: Matrix = (0..sq.len())
                .map(|i| (0..sq.len()).map(|j| c(if i == j { -1.0 } else { 0.0 }, 0.0)).collect())
                .collect();
            assert_eq!(matrix_sign(&sq, &minus_one), Some(1));
        }
        for a in 0..1u16 << m {
            let ma = blade_matrix(&gens, a);
            for b in 0..1u16 << m {
                let product = matmul(&ma, &blade_matrix(&gens, b));
                let (sign, blade) = blade_product_sign(BladeIndex(a), BladeIndex(b), m).unwrap();
                assert_eq!(blade.0, a ^ b);
                assert_eq!(matrix_sign(&product, &blade_matrix(&gens, a ^ b)), Some(sign), "m={m} a={a:b} b={b:b}");
            }
        }
    }
}

#[test]
fn generators_square_to_minus_one() {
    for dim in 1..=8 {
        for i in 1..=dim {
            let e = Multivector::generator(dim, i);
            assert_eq!(&e * &e, Multivector::scalar(dim, c(-1.0, 0.0)));
        }
    }
}

#[test]
fn oversized_dimension_rejected() {
    assert!(blade_product_sign(BladeIndex(1), BladeIndex(1), 9).is_err());
    assert!(blade_product_sign(BladeIndex(8), BladeIndex(1), 3).is_err());
}

fn multivector(dim: usize) -> impl Strategy<Value = Multivector> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1 << dim)
        .prop_map(move |v| Multivector::from_coeffs(dim, v.into_iter().map(|(re, im)| c(re, im)).collect()).unwrap())
}

fn triple() -> impl Strategy<Value = (Multivector, Multivector, Multivector)> {
    (1usize..=6).prop_flat_map(|d| (multivector(d), multivector(d), multivector(d)))
}

fn vector(n: usize) -> impl Strategy<Value = VectorR2n> {
    prop::collection::vec(-2.0..2.0f64, 2 * n).prop_map(|v| VectorR2n::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative((a, b, cc) in triple()) {
        let lhs = &(&a * &b) * &cc;
        let rhs = &a * &(&b * &cc);
        prop_assert!(lhs.distance(&rhs) <= 1e-12 * (1.0 + a.norm() * b.norm() * cc.norm()));
    }

    #[test]
    fn product_distributes((a, b, cc) in triple()) {
        let lhs = &a * &(&b + &cc);
        let rhs = &(&a * &b) + &(&a * &cc);
        prop_assert!(lhs.distance(&rhs) <= 1e-12 * (1.0 + a.norm() * (b.norm() + cc.norm())));
    }

    #[test]
    fn conjugations_reverse_products((a, b, _) in triple()) {
        let ab = &a * &b;
        let tol = 1e-12 * (1.0 + a.norm() * b.norm());
        prop_assert!(ab.clifford_conjugate().distance(&(&b.clifford_conjugate() * &a.clifford_conjugate())) <= tol);
        prop_assert!(ab.hermitean_dagger().distance(&(&b.hermitean_dagger() * &a.hermitean_dagger())) <= tol);
        prop_assert_eq!(a.clifford_conjugate().clifford_conjugate(), a.clone());
        prop_assert_eq!(a.hermitean_dagger().hermitean_dagger(), a);
    }

    #[test]
    fn grades_partition_the_element((a, _, _) in triple()) {
        let mut sum = Multivector::zero(a.dim());
        for k in 0..=a.dim() {
            sum += &a.grade_part(k).unwrap();
        }
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn vectors_square_to_minus_norm(x in (1usize..=4).prop_flat_map(vector)) {
        let e = embed_vector(&x);
        let sq = &e * &e;
        prop_assert!(sq.distance(&Multivector::scalar(x.dim(), c(-x.dot(&x), 0.0))) <= 1e-12 * (1.0 + x.dot(&x)));
    }

    #[test]
    fn complex_structure_squares_to_minus_one(x in (1usize..=4).prop_flat_map(vector)) {
        let jj = apply_j_vector(&apply_j_vector(&x));
        prop_assert_eq!(jj.components().to_vec(), x.scaled(-1.0).components().to_vec());
        prop_assert!(apply_j_vector(&x).dot(&x).abs() <= 1e-12);
    }

    #[test]
    fn hermitean_variables_anticommute_to_norm(x in (1usize..=3).prop_flat_map(vector)) {
        let (z, zd) = hermitean_vars(&x);
        let anti = &(&z * &zd) + &(&zd * &z);
        let r2 = x.dot(&x);
        prop_assert!(anti.distance(&Multivector::scalar(x.dim(), c(r2, 0.0))) <= 1e-14 * (1.0 + r2));
        prop_assert!((&z * &z).norm() <= 1e-14 * (1.0 + r2));
    }
}

#[test]
fn witt_basis_is_grassmann_and_dual() {
    for n in 1..=4 {
        let w = witt_basis(n).unwrap();
        let dim = 2 * n;
        for j in 1..=n {
            assert!(w.f(j).hermitean_dagger().distance(w.f_dag(j)) <= 1e-15);
            for k in 1..=n {
                let ff = &(w.f(j) * w.f(k)) + &(w.f(k) * w.f(j));
                let gg = &(w.f_dag(j) * w.f_dag(k)) + &(w.f_dag(k) * w.f_dag(j));
                let fg = &(w.f(j) * w.f_dag(k)) + &(w.f_dag(k) * w.f(j));
                let delta = if j == k { Multivector::one(dim) } else { Multivector::zero(dim) };
                assert!(ff.norm() <= 1e-14 && gg.norm() <= 1e-14);
                assert!(fg.distance(&delta) <= 1e-14);
            }
        }
    }
}

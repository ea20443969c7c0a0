use l1rpca_core::matrix::Mat;
use l1rpca_core::rng::{gaussian_matrix, rng_from_seed};

fn main() {
    let mut rng = rng_from_seed(123);
    let a = gaussian_matrix(&mut rng, 10, 3, 1.0);
    let b = gaussian_matrix(&mut rng, 8, 3, 1.0);
    let l = &a * b.transpose();
    let svd = l.clone().try_svd(true, true, f64::EPSILON, 10_000).unwrap();
    println!("try_svd values: {:?}", svd.singular_values.as_slice());
    let svd2 = l.clone().svd(true, true);
    println!("svd     values: {:?}", svd2.singular_values.as_slice());
}

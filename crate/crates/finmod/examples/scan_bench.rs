use finmod::abelian::FiniteAbelianGroup;
use std::ops::ControlFlow;
use std::time::Instant;

fn main() {
    for orders in [vec![2i64; 9], vec![4, 2, 2, 2, 2, 2, 2, 2]] {
        let g = FiniteAbelianGroup::new(orders.clone()).unwrap();
        let t = Instant::now();
        let mut n = 0u64;
        g.scan_subgroups::<()>(u128::MAX, |_| {
            n += 1;
            ControlFlow::Continue(())
        });
        println!("{orders:?}: {n} subgroups in {:?}", t.elapsed());
    }
}

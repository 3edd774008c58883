use cogic::gaussian::*;
use cogic::inner::*;
use cogic::region::*;

fn main() {
    let ch = GaussianChannel::from_squared_gains(0.3, 2.0, 6.0, 6.0).unwrap();
    let run = |g: usize, r: usize| {
        trace_frontier(&InnerBoundSpec {
            scheme: InnerScheme::Joint,
            channel: ch,
            search: SearchSettings { grid: g, refine_rounds: r },
        })
        .unwrap()
    };
    let t = std::time::Instant::now();
    let a = run(13, 8);
    let ta = t.elapsed();
    let t = std::time::Instant::now();
    let b = run(26, 8);
    let tb = t.elapsed();
    println!("times: 13={ta:?} 26={tb:?}");
    let gap = |x: &RateRegion, y: &RateRegion| {
        let mut worst = (0.0f64, 0.0f64);
        for v in y.frontier() {
            let viol = x.violation_of(*v);
            if viol > worst.0 { worst = (viol, v.r2); }
        }
        worst
    };
    println!("13v26: {:?} / {:?}", gap(&a, &b), gap(&b, &a));
    println!("discrepancy: {}", frontier_discrepancy(&a, &b));
}

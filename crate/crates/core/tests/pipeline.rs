use mzi_core::calibration::{fit_fringe, ControlUnit, DeviceModel, Dissipation, FringeScan, ResistorSpec};
use mzi_core::interference::{fit_sinusoid, noon_fringes, power_grid, NoonSetup, PhotonPairModel};
use mzi_core::io::{read_fringe_scan, read_tomography_bundle, read_unitary, write_fringe_scan, write_matrix, write_singles, write_visibilities};
use mzi_core::thermal::{
    predict_alpha, solve_heat_fd, CrosstalkModel, HeatGrid, Heater, HeaterDrive, MaterialParams, ShifterGeometry,
    SolverOptions,
};
use mzi_core::tomography::{gauge_fixed_fidelity, reconstruct, simulate_dataset, Shots};
use mzi_core::unitary::random_haar;
use mzi_core::Unitary;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn predicted_device() -> DeviceModel<f64> {
    let geom = ShifterGeometry::from_log_ratio(1.6117, 12e-3, 20e-3);
    let alpha = predict_alpha(&geom, &MaterialParams::borosilicate_1550()).unwrap();
    DeviceModel::new(0.5, 0.5, CrosstalkModel::single(0.3, alpha), vec![ResistorSpec::nominal()], Dissipation::Series).unwrap()
}

#[test]
fn voltage_scan_of_predicted_device_fits_back_to_the_prediction() {
    let device = predicted_device();
    let volts: Vec<f64> = (0..60).map(|k| 6.3 * k as f64 / 59.0).collect();
    let (mut bar, mut cross) = (Vec::new(), Vec::new());
    for &v in &volts {
        let u = device.unitary(&device.powers(&[v]).unwrap()).unwrap();
        cross.push(u.get(1, 0).norm_sqr());
        bar.push(u.get(0, 0).norm_sqr());
    }
    // output 1 of the scan follows (1 + cos phi) / 2
    let scan = FringeScan::from_values(volts, ControlUnit::Volts, vec![cross, bar], "1->2").unwrap();
    let fit = fit_fringe(&scan).unwrap();
    assert!((fit.alpha - device.crosstalk.alphas[0]).abs() < 1e-6, "{}", fit.alpha);
    assert!((fit.visibility - 1.0).abs() < 1e-6);
}

#[test]
fn noon_period_follows_the_thermal_prediction() {
    let device = predicted_device();
    let alpha = device.crosstalk.alphas[0];
    let grid = power_grid(1, 0, 0.0, 0.6, 151).unwrap();
    let curves = noon_fringes(&device.crosstalk, &grid, &PhotonPairModel::ideal().with_overlap(0.9), &NoonSetup::default()).unwrap();
    let w = fit_sinusoid(&curves.control, &curves.p11).unwrap().frequency;
    assert!((w - 2.0 * alpha).abs() < 1e-6 * alpha, "{w}");
}

#[test]
fn fd_dissipates_the_requested_power_per_length() {
    let g = HeatGrid::<f64>::chip(121, 41);
    let centre = g.width / 2.0;
    let g = g.with_heater(Heater::centered(centre, 0.3e-3, HeaterDrive::Power(0.4)));
    let f = solve_heat_fd(&g, &SolverOptions::default()).unwrap();
    let (into_glass, out) = f.boundary_flux();
    let expected = 0.4 / g.wire_length;
    assert!((into_glass - expected).abs() < 1e-6 * expected, "{into_glass}");
    assert!((out - expected).abs() < 1e-3 * expected, "{out}");
}

#[test]
fn scan_survives_csv() {
    let device = predicted_device();
    let powers: Vec<f64> = (0..40).map(|k| 0.012 * k as f64).collect();
    let out: Vec<f64> = powers.iter().map(|&p| device.unitary(&[p]).unwrap().get(1, 0).norm_sqr()).collect();
    let scan = FringeScan::from_values(powers, ControlUnit::Watts, vec![out], "a").unwrap();
    let mut buf = Vec::new();
    write_fringe_scan(&mut buf, &scan).unwrap();
    let back: FringeScan<f64> = read_fringe_scan(buf.as_slice(), "a").unwrap();
    assert_eq!(back, scan);
    assert_eq!(fit_fringe(&back).unwrap(), fit_fringe(&scan).unwrap());
}

#[test]
fn tomography_files_reconstruct_like_the_in_memory_dataset() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let u: Unitary<f64> = random_haar(3, &mut rng).unwrap();
    let pair = PhotonPairModel::ideal().with_overlap(0.95);
    let data = simulate_dataset(&u, Shots::Poisson(1e5), &pair, &mut rng).unwrap();
    let (mut s, mut v, mut m) = (Vec::new(), Vec::new(), Vec::new());
    write_singles(&mut s, &data).unwrap();
    write_visibilities(&mut v, &data.visibilities).unwrap();
    let loaded = read_tomography_bundle(s.as_slice(), v.as_slice(), 0.95).unwrap();
    assert_eq!(loaded.singles, data.singles);
    let direct = reconstruct(&data).unwrap();
    let from_files = reconstruct(&loaded).unwrap();
    assert!(direct.unitary.matrix().distance(from_files.unitary.matrix()) < 1e-9);

    write_matrix(&mut m, from_files.unitary.matrix()).unwrap();
    let reread: Unitary<f64> = read_unitary(m.as_slice()).unwrap();
    let f = gauge_fixed_fidelity(&u, &reread).unwrap();
    let fc = gauge_fixed_fidelity(&Unitary::new(u.matrix().conj()).unwrap(), &reread).unwrap();
    assert!(f.max(fc) > 0.99, "{f} {fc}");
    assert!(from_files.conjugate_ambiguous);
}

"""Simplified entry point for simulations, certificates and sweeps."""

from functools import cached_property, partial
from pathlib import Path
from typing import Any

import numpy as np

from rd_contract.core.certificates import (
    certified_boundary,
    certify_linear_system,
    lyapunov_metric,
    small_omega_threshold,
)
from rd_contract.core.errors import NoBracketError
from rd_contract.core.grid import l2_norm, make_uniform_grid
from rd_contract.core.models import (
    SPECIES,
    TWO_SPECIES_MATRIX,
    build_example_3_1,
    build_example_3_2,
    build_translation_model,
    invariant_set_bounds,
    invariant_set_violation,
    qss_errors,
    ramp_initial_state,
    reduced_qss_trajectory,
    scalar_certificate,
    translation_certificate,
    translation_initial_state,
    translation_profiles,
    two_species_diffusion,
    uniform_initial_state,
)
from rd_contract.core.simulation import (
    RDSystem,
    SlopeProbe,
    classify_slope,
    critical_parameter,
    deviation_norm,
    integrate,
    log_norm_slope,
)
from rd_contract.core.utils import emit_plot_data, logger, logging_helper, serialize_to_json
from rd_contract.core.utils.checksum import compute_config_hash, compute_file_checksum
from rd_contract.core.utils.csv_output import format_value
from rd_contract.core.utils.logging import file_logging_context
from rd_contract.types.certificate import CertificateMode, CertificateReport, EigenReport
from rd_contract.types.config import Command, ModelPreset, RunConfig, RuntimeSettings
from rd_contract.types.grid import SpatialGrid
from rd_contract.types.simulation import CriticalPoint, Stability, SweepPoint, Trajectory
from rd_contract.types.translation import TranslationParams

from .internal.sweep_runner import SweepRunner, omega_sweep_point, zeta_critical_point

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CERTIFIED = 2


class RDContract:
    """Facade over the simulator, the certificate checks and the sweeps.

    Every method reads its parameters from the run configuration and writes its outputs to
    ``config.output_dir``. Each output starts with (CSV) or contains (JSON) the config hash, the
    seed and the command, so a file can be traced back to the configuration that produced it.

    Example:
        ```python
        from rd_contract.api import RDContract
        from rd_contract.types.config import RunConfig

        config = RunConfig().with_overrides({"model.preset": "example32", "model.zeta": 3.0})
        contract = RDContract(config=config)
        report = contract.certify()
        print(report.certified, report.lambda_star)
        ```
    """

    def __init__(
        self,
        *,
        config: Path | RunConfig | None = None,
        runtime: RuntimeSettings | None = None,
    ) -> None:
        """Initialize with a run configuration.

        Args:
            config: Optional configuration. Can be:
                - Path to config JSON file
                - RunConfig instance
                - None (uses default configuration)
            runtime: Environment settings; read from ``RD_CONTRACT_*`` variables when None

        Raises:
            TypeError: If config type is invalid
            FileNotFoundError: If config file doesn't exist
            ValueError: If config is invalid
        """
        self._config = RDContract._load_config(config)
        self._runtime = runtime if runtime is not None else RuntimeSettings()
        self._config_hash = compute_config_hash(self._config.model_dump(mode="json"))

        logger.info("RDContract initialized successfully")

    @property
    def config(self) -> RunConfig:
        """Access the configuration."""
        return self._config

    @property
    def config_hash(self) -> str:
        """SHA-256 of the canonical config dump."""
        return self._config_hash

    @property
    def output_dir(self) -> Path:
        return self._config.output_dir

    @cached_property
    def grid(self) -> SpatialGrid:
        return make_uniform_grid(self._config.grid.n)

    @property
    def translation_params(self) -> TranslationParams:
        """Translation constants with the configured diffusion scaling applied."""
        return self._config.translation.scaled(self._config.model.diffusion_scale)

    def header(self, command: Command | None = None) -> str:
        """``config_hash=<sha> seed=<seed> command=<cmd>``, the first line of every CSV."""
        command = command or self._config.command
        return f"config_hash={self._config_hash} seed={self._config.seed} command={command}"

    # ------------------------------------------------------------------
    # Systems
    # ------------------------------------------------------------------

    def build_system(self) -> RDSystem:
        """Assemble the configured preset on the configured grid."""
        model = self._config.model
        if model.preset is ModelPreset.EXAMPLE31:
            return build_example_3_1(model.epsilon, model.omega, self.grid)
        if model.preset is ModelPreset.EXAMPLE32:
            return build_example_3_2(model.zeta, model.r, self.grid)
        return build_translation_model(self.translation_params, self.grid)

    def initial_state(self) -> np.ndarray:
        """Default initial state of the configured preset."""
        preset = self._config.model.preset
        if preset is ModelPreset.EXAMPLE31:
            return uniform_initial_state(self.grid)
        if preset is ModelPreset.EXAMPLE32:
            return ramp_initial_state(self.grid)
        return translation_initial_state(self.grid)

    def _species_names(self, n_species: int) -> tuple[str, ...]:
        if self._config.model.preset is ModelPreset.TRANSLATION:
            return SPECIES
        return tuple(f"z{i + 1}" for i in range(n_species))

    def _integrate(self, system: RDSystem, z0: np.ndarray) -> Trajectory:
        time = self._config.time
        return integrate(system, z0, time.t_end, dt=time.dt, sample_every=time.sample_every)

    # ------------------------------------------------------------------
    # Output helpers
    # ------------------------------------------------------------------

    def _write_json(self, name: str, payload: dict[str, Any], command: Command) -> Path:
        path = self.output_dir / name
        path.parent.mkdir(parents=True, exist_ok=True)
        document = {"config_hash": self._config_hash, "seed": self._config.seed, "command": str(command), **payload}
        text = serialize_to_json(document, indent=2)
        path.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
        logger.info(f"Wrote {path}")
        return path

    def _write_csv(self, name: str, series: dict[str, Any], command: Command) -> Path:
        path = emit_plot_data(series, self.output_dir / name, header_comment=self.header(command))
        logger.info(f"Wrote {path}")
        return path

    # ------------------------------------------------------------------
    # Commands
    # ------------------------------------------------------------------

    def simulate(self) -> Trajectory:
        """Integrate the configured preset and write trajectory.csv, norms.csv and summary.json.

        Returns:
            The sampled trajectory

        Raises:
            IntegrationFailureError: If the run fails
            DegenerateWindowError: If the slope window holds fewer than two samples
        """
        system = self.build_system()
        traj = self._integrate(system, self.initial_state())
        grid = traj.grid
        names = self._species_names(traj.n_species)

        n_samples, n_species, n = traj.states.shape
        trajectory_path = self._write_csv(
            "trajectory.csv",
            {
                "t": np.repeat(traj.times, n_species * n),
                "species": np.tile(np.repeat(np.array(names), n), n_samples),
                "x": np.tile(grid.nodes, n_samples * n_species),
                "value": traj.states.reshape(-1),
            },
            Command.SIMULATE,
        )
        deviation = np.array([deviation_norm(s, system.psi) for s in traj.states])
        norms_path = self._write_csv(
            "norms.csv", {"t": traj.times, "l2_norm": traj.norms, "deviation_norm": deviation}, Command.SIMULATE
        )

        slope = log_norm_slope(traj, *self._config.time.window)
        summary: dict[str, Any] = {
            "preset": str(self._config.model.preset),
            "slope": slope,
            "classification": str(classify_slope(slope)),
            "final_norm": float(traj.norms[-1]),
            "final_averages": traj.averages()[-1],
            "lambda_floors": system.lambda_floors(),
            "checksums": {
                "trajectory.csv": compute_file_checksum(trajectory_path),
                "norms.csv": compute_file_checksum(norms_path),
            },
        }
        if self._config.model.preset is ModelPreset.TRANSLATION:
            profiles = translation_profiles(self.translation_params, grid)
            excess, lowest = invariant_set_violation(traj, self.translation_params, profiles)
            summary["invariant_set_excess"] = excess
            summary["min_concentration"] = lowest

        self._write_json("summary.json", summary, Command.SIMULATE)
        logging_helper.print_panel(
            "Simulation",
            {"preset": summary["preset"], "slope": slope, "classification": summary["classification"]},
        )
        return traj

    def certify(self) -> CertificateReport:
        """Evaluate the contraction certificate of the configured preset and write certificate.json.

        - ``example31``: closed-form scalar certificate.
        - ``example32``: hierarchical shortcut with M1 from the Lyapunov equation of A.
        - ``translation``: closed-form small-gain certificate with the invariant set checked
          against the default initial state.
        """
        config = self._config
        model = config.model
        if model.preset is ModelPreset.EXAMPLE31:
            report = scalar_certificate(model.epsilon, model.omega, self.grid)
        elif model.preset is ModelPreset.EXAMPLE32:
            report = certify_linear_system(
                lambda _t, _x: TWO_SPECIES_MATRIX,
                two_species_diffusion(model.zeta, model.r, self.grid),
                lyapunov_metric(TWO_SPECIES_MATRIX),
                lambda_source=config.lambda_source,
                sampling=config.sampling,
                pointwise_gamma=model.pointwise_gamma,
                mode=CertificateMode.HIERARCHICAL_1,
            )
        else:
            params = self.translation_params
            profiles = translation_profiles(params, self.grid)
            bounds = invariant_set_bounds(params, profiles, translation_initial_state(self.grid))
            report = translation_certificate(params, profiles, bounds, config.lambda_source)

        self._write_json("certificate.json", {"report": report.model_dump(mode="json")}, Command.CERTIFY)
        logging_helper.print_panel(
            "Certificate",
            {
                "preset": str(model.preset),
                "mode": str(report.mode),
                "lambda1": report.lambda1,
                "lambda2": report.lambda2,
                "beta": report.beta,
                "certified": report.certified,
                "lambda_star": report.lambda_star if report.lambda_star is not None else "-",
            },
        )
        return report

    def _omega_critical(self, points: list[SweepPoint]) -> float | None:
        """Bisect inside the first stable -> unstable pair of the sweep."""
        for left, right in zip(points, points[1:], strict=False):
            if left.classification is Stability.STABLE and right.classification is Stability.UNSTABLE:
                time = self._config.time
                probe = SlopeProbe(
                    builder=partial(build_example_3_1, self._config.model.epsilon, grid=self.grid),
                    initial_state=uniform_initial_state,
                    t_end=time.t_end,
                    window=time.window,
                    dt=time.dt,
                    sample_every=time.sample_every,
                )
                return critical_parameter(
                    probe, left.parameter, right.parameter, self._config.sweep.tol * left.parameter
                )
        logger.warning("No stable -> unstable transition inside the omega range")
        return None

    def sweep_omega(self) -> list[SweepPoint]:
        """Slope of the scalar system on a log-spaced omega grid, plus the critical omega.

        Writes sweep_omega.csv (omega, slope, classification, certified) and sweep_omega.json with the
        bisected critical omega and the certified boundaries.
        """
        config = self._config
        sweep = config.sweep
        epsilon = config.model.epsilon
        omegas = np.geomspace(sweep.omega_min, sweep.omega_max, sweep.steps)
        workers = self._runtime.effective_workers(sweep.workers)
        logger.info(f"Sweeping {omegas.size} omega values with {workers} worker(s)")

        task = partial(omega_sweep_point, epsilon=epsilon, n=config.grid.n, time=config.time)
        points = SweepRunner(workers).run(task, omegas.tolist())
        self._write_csv(
            "sweep_omega.csv",
            {
                "omega": [p.parameter for p in points],
                "slope": [p.slope for p in points],
                "classification": [str(p.classification) for p in points],
                "certified": [bool(p.certified) for p in points],
            },
            Command.SWEEP_OMEGA,
        )

        def scalar_certified(omega: float) -> bool:
            return scalar_certificate(epsilon, omega, self.grid).certified

        try:
            boundary = certified_boundary(scalar_certified, sweep.omega_min, sweep.omega_max, 1e-6 * sweep.omega_min)
        except NoBracketError as e:
            logger.warning(f"No certified boundary inside the omega range: {e}")
            boundary = None

        omega_cr = self._omega_critical(points)
        self._write_json(
            "sweep_omega.json",
            {
                "epsilon": epsilon,
                "omega_critical": omega_cr,
                "certified_boundary": boundary,
                "small_omega_threshold": small_omega_threshold(epsilon),
            },
            Command.SWEEP_OMEGA,
        )
        logging_helper.print_table(
            [
                {"omega": p.parameter, "slope": p.slope, "class": str(p.classification), "certified": p.certified}
                for p in points
            ]
        )
        logging_helper.print_panel(
            "Omega sweep",
            {
                "omega_critical": omega_cr if omega_cr is not None else "-",
                "certified_boundary": boundary if boundary is not None else "-",
                "small_omega_threshold": small_omega_threshold(epsilon),
            },
        )
        return points

    def sweep_zeta(self) -> list[CriticalPoint]:
        """Bisected zeta_cr for evenly spaced r, next to the bound 2/nu(r); writes sweep_zeta.csv."""
        config = self._config
        sweep = config.sweep
        radii = np.linspace(sweep.r_min, sweep.r_max, sweep.steps)
        workers = self._runtime.effective_workers(sweep.workers)
        logger.info(f"Sweeping {radii.size} r values with {workers} worker(s)")

        task = partial(
            zeta_critical_point,
            n=config.grid.n,
            zeta_min=sweep.zeta_min,
            zeta_max=sweep.zeta_max,
            tol=sweep.tol,
            time=config.time,
        )
        points = SweepRunner(workers).run(task, radii.tolist())
        self._write_csv(
            "sweep_zeta.csv",
            {
                "r": [p.r for p in points],
                "zeta_cr": [p.critical for p in points],
                "bound_2_over_nu": [p.bound for p in points],
                "nu": [p.nu for p in points],
            },
            Command.SWEEP_ZETA,
        )
        above = [p.r for p in points if p.critical > p.bound]
        if above:
            logger.warning(f"Simulated zeta_cr exceeds 2/nu at r = {above}")
        logging_helper.print_table(
            [{"r": p.r, "zeta_cr": p.critical, "2/nu": p.bound, "nu": p.nu} for p in points]
        )
        return points

    def bcf(self) -> float:
        """Binding correction factor of the translation profiles; writes bcf.json and profiles.csv."""
        params = self._config.translation
        profiles = translation_profiles(params, self.grid)
        v_m, v_r, v_c = profiles.volume_matrix()
        hat_m, hat_r, hat_c = profiles.normalized_matrix()
        self._write_csv(
            "profiles.csv",
            {
                "x": self.grid.nodes,
                "v_m": v_m,
                "v_r": v_r,
                "v_c": v_c,
                "v_hat_m": hat_m,
                "v_hat_r": hat_r,
                "v_hat_c": hat_c,
            },
            Command.BCF,
        )
        self._write_json(
            "bcf.json",
            {"bcf": profiles.bcf, "r_m": params.r_m, "r_r": params.r_r, "r_c": params.r_c, "x_star": params.x_star},
            Command.BCF,
        )
        logging_helper.print_panel(
            "Binding correction factor", {"bcf": profiles.bcf, "r_m": params.r_m, "r_r": params.r_r}
        )
        return profiles.bcf

    def eig(self, *, export_operator: bool = False) -> list[EigenReport]:
        """Analytic floor and numeric second eigenvalue of every species operator; writes eig.json.

        Args:
            export_operator: Also write ``operator_<i>.txt`` with one ``row col value`` line per entry
        """
        system = self.build_system()
        reports = [op.report() for op in system.operators]
        self._write_json(
            "eig.json",
            {"preset": str(self._config.model.preset), "species": [r.model_dump(mode="json") for r in reports]},
            Command.EIG,
        )
        if export_operator:
            for i, op in enumerate(system.operators):
                path = self.output_dir / f"operator_{i}.txt"
                lines = [f"# {self.header(Command.EIG)} species={i}"]
                lines.extend(f"{row} {col} {format_value(value)}" for row, col, value in op.to_triplets())
                path.write_text("\n".join(lines) + "\n", encoding="utf-8")
                logger.info(f"Wrote {path}")
        logging_helper.print_table(
            [
                {"species": i, "theta": r.theta, "floor": r.lambda_bound, "numeric": r.lambda_numeric}
                for i, r in enumerate(reports)
            ]
        )
        return reports

    def qss(self) -> dict[str, Any]:
        """Simulate the translation model and compare its averages with the reduced QSS model.

        Writes qss.csv (time series of the averages, the QSS errors and the reduced model) and
        qss.json (terminal errors, decay factors, conservation and invariant-set checks).
        """
        params = self.translation_params
        grid = self.grid
        profiles = translation_profiles(params, grid)
        system = build_translation_model(params, grid)
        traj = self._integrate(system, translation_initial_state(grid))

        averages = traj.averages()
        errors = [qss_errors(s, params, profiles) for s in traj.states]
        e_bar = np.array([e.e_bar for e in errors])
        perp = np.array([[l2_norm(f.values, grid) for f in (e.m_perp, e.R_perp, e.c_perp)] for e in errors])
        m0, r0, c0 = averages[0]
        reduced = reduced_qss_trajectory(params, profiles.bcf, m0, r0, traj.times, c_bar0=c0)

        self._write_csv(
            "qss.csv",
            {
                "t": traj.times,
                "m_bar": averages[:, 0],
                "R_bar": averages[:, 1],
                "c_bar": averages[:, 2],
                "e_bar": e_bar,
                "m_perp_norm": perp[:, 0],
                "R_perp_norm": perp[:, 1],
                "c_perp_norm": perp[:, 2],
                "m_bar_reduced": reduced[:, 0],
                "R_bar_reduced": reduced[:, 1],
                "c_bar_reduced": reduced[:, 2],
            },
            Command.QSS,
        )

        m_end, r_end, _ = averages[-1]
        manifold = profiles.bcf * m_end * r_end / params.K
        excess, lowest = invariant_set_violation(traj, params, profiles)
        mrna_conserved = averages[:, 0] + averages[:, 2]
        ribosome_conserved = averages[:, 1] + averages[:, 2]
        result: dict[str, Any] = {
            "bcf": profiles.bcf,
            "e_bar_final": float(e_bar[-1]),
            "e_bar_relative": float(abs(e_bar[-1]) / manifold) if manifold > 0.0 else None,
            "perp_decay": (perp[0] / np.maximum(perp[-1], np.finfo(float).tiny)).tolist(),
            "reduced_max_error": float(np.max(np.abs(reduced - averages))),
            "mrna_conservation_drift": float(np.max(np.abs(mrna_conserved - mrna_conserved[0]))),
            "ribosome_conservation_drift": float(np.max(np.abs(ribosome_conserved - ribosome_conserved[0]))),
            "invariant_set_excess": excess,
            "min_concentration": lowest,
        }
        self._write_json("qss.json", result, Command.QSS)
        logging_helper.print_panel(
            "QSS comparison",
            {key: result[key] for key in ("bcf", "e_bar_final", "reduced_max_error")},
        )
        return result

    def run(self, *, export_operator: bool = False) -> int:
        """Execute the configured command, mirroring the log into ``run.log``.

        Returns:
            0 on success, 2 when a certificate fails, 1 on error
        """
        command = self._config.command
        self.output_dir.mkdir(parents=True, exist_ok=True)
        with file_logging_context(logger.name, self.output_dir / "run.log"):
            logger.info(self.header())
            try:
                if command is Command.SIMULATE:
                    self.simulate()
                elif command is Command.CERTIFY:
                    return EXIT_OK if self.certify().certified else EXIT_NOT_CERTIFIED
                elif command is Command.SWEEP_OMEGA:
                    self.sweep_omega()
                elif command is Command.SWEEP_ZETA:
                    self.sweep_zeta()
                elif command is Command.BCF:
                    self.bcf()
                elif command is Command.EIG:
                    self.eig(export_operator=export_operator)
                else:
                    self.qss()
            except Exception as e:
                logger.error(f"Failed to run {command}: {e}")
                return EXIT_ERROR
        return EXIT_OK

    @staticmethod
    def _load_config(config: Path | RunConfig | None) -> RunConfig:
        """Load configuration from various sources.

        Args:
            config: Path to config file, RunConfig instance, or None

        Returns:
            RunConfig instance

        Raises:
            TypeError: If config type is invalid
        """
        if config is None:
            return RunConfig()
        if isinstance(config, Path):
            return RunConfig.from_file(config)
        if isinstance(config, RunConfig):
            return config
        raise TypeError(f"config must be Path, RunConfig, or None, got {type(config).__name__}")

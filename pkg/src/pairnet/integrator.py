"""Adaptive Dormand-Prince 5(4) integration with dense output.

Deliberately self-contained: the comparison tolerances downstream require a
deterministic stepper with an explicit negativity policy (steps driving any
component below -floor*scale are rejected and retried at half step), which
off-the-shelf drivers do not expose.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "IntegrationSpec",
    "TimeSeries",
    "IntegrationError",
    "integrate",
    "solve_to_plateau",
]

# Dormand-Prince 5(4) tableau (FSAL).
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.array([
    [0, 0, 0, 0, 0, 0],
    [1 / 5, 0, 0, 0, 0, 0],
    [3 / 40, 9 / 40, 0, 0, 0, 0],
    [44 / 45, -56 / 15, 32 / 9, 0, 0, 0],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0, 0],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
])
_B = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
# Difference between the 5th- and embedded 4th-order weights.
_E = np.array([
    71 / 57600, 0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40,
])
# Coefficients of the quartic interpolant (Shampine's free interpolant).
_P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608,
     -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933,
     87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304,
     -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408,
     701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883,
     -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_BETA = 0.04  # PI stabilization exponent
_EXPO = 0.2 - 0.75 * _BETA


class IntegrationError(RuntimeError):
    """Raised on non-finite right-hand-side output."""

    def __init__(self, message, t=None, y=None):
        super().__init__(message)
        self.t = t
        self.y = y


@dataclass
class IntegrationSpec:
    t0: float
    t_end: float
    output_times: np.ndarray
    rtol: float = 1e-8
    atol: float = 1e-10
    max_steps: int = 100_000
    negativity_floor: float = 1e-9
    # Reference magnitude for the negativity floor (typically the node
    # count N); defaults to max(1, ||y0||_inf) when left as None.
    scale: float = None

    def __post_init__(self):
        self.output_times = np.asarray(self.output_times, dtype=float)
        if not self.t0 < self.t_end:
            raise ValueError("require t0 < t_end")
        if self.output_times.size and (
            self.output_times[0] < self.t0 or self.output_times[-1] > self.t_end
        ):
            raise ValueError("output_times must lie within [t0, t_end]")
        if np.any(np.diff(self.output_times) <= 0):
            raise ValueError("output_times must be strictly increasing")
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass
class TimeSeries:
    times: np.ndarray
    states: np.ndarray
    diagnostics: dict = field(default_factory=dict)
    success: bool = True
    message: str = "ok"
    n_steps: int = 0
    n_rejected: int = 0


def _error_norm(err, y_old, y_new, rtol, atol):
    sc = atol + rtol * np.maximum(np.abs(y_old), np.abs(y_new))
    return float(np.sqrt(np.mean((err / sc) ** 2)))


def _initial_step(rhs, t0, y0, f0, rtol, atol):
    sc = atol + rtol * np.abs(y0)
    d0 = float(np.sqrt(np.mean((y0 / sc) ** 2)))
    d1 = float(np.sqrt(np.mean((f0 / sc) ** 2)))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + h0 * f0
    f1 = np.asarray(rhs(t0 + h0, y1), dtype=float)
    d2 = float(np.sqrt(np.mean(((f1 - f0) / sc) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1)


def _steps(rhs, y0, spec):
    """Yield accepted steps (t, y, h, K) starting after an initial (t0, y0)."""
    t = spec.t0
    y = np.array(y0, dtype=float)
    f = np.asarray(rhs(t, y), dtype=float)
    if not np.all(np.isfinite(f)):
        raise IntegrationError("non-finite right-hand side at start", t, y)
    scale = spec.scale if spec.scale is not None else max(1.0, float(np.max(np.abs(y))))
    floor = -spec.negativity_floor * scale
    h = min(_initial_step(rhs, t, y, f, spec.rtol, spec.atol), spec.t_end - t)

    n_stages = 7
    K = np.empty((n_stages, y.size))
    K[0] = f
    err_old = 1e-4
    max_factor = _MAX_FACTOR
    n_steps = n_rejected = 0

    while t < spec.t_end:
        if n_steps + n_rejected >= spec.max_steps:
            yield "fail", t, y, n_steps, n_rejected
            return
        h = min(h, spec.t_end - t)
        for s in range(1, n_stages):
            ys = y + h * (K[:s].T @ _A[s, :s])
            K[s] = rhs(t + _C[s] * h, ys)
        y_new = y + h * (K.T @ _B)
        if not np.all(np.isfinite(K[-1])) or not np.all(np.isfinite(y_new)):
            raise IntegrationError("non-finite right-hand side", t + h, y_new)
        err_vec = h * (K.T @ _E)
        err = _error_norm(err_vec, y, y_new, spec.rtol, spec.atol)

        if err > 1.0:
            n_rejected += 1
            factor = max(_MIN_FACTOR, _SAFETY * err ** (-_EXPO))
            h *= factor
            max_factor = 1.0
            continue
        if float(np.min(y_new)) < floor:
            n_rejected += 1
            h *= 0.5
            max_factor = 1.0
            continue

        n_steps += 1
        yield "step", t, y, h, K.copy(), y_new, n_steps, n_rejected
        t = t + h
        y = y_new
        K[0] = K[-1]  # FSAL
        if err == 0.0:
            factor = max_factor
        else:
            factor = min(
                max_factor,
                max(_MIN_FACTOR, _SAFETY * err ** (-_EXPO) * err_old ** _BETA),
            )
        err_old = max(err, 1e-4)
        max_factor = _MAX_FACTOR
        h *= factor


def _dense_eval(t, y, h, K, t_query):
    theta = (t_query - t) / h
    powers = np.vstack([theta, theta ** 2, theta ** 3, theta ** 4])
    return y[:, None] + h * (K.T @ _P) @ powers


def integrate(rhs, y0, spec, monitors=None):
    """Integrate rhs(t, y) over [t0, t_end], sampling at spec.output_times.

    monitors is an optional mapping name -> f(t, y) evaluated at every output
    time and collected into TimeSeries.diagnostics.  On step-budget
    exhaustion the partial series is returned with success=False.
    """
    out_t = spec.output_times
    y0 = np.array(y0, dtype=float)
    out_states = np.empty((out_t.size, y0.size))
    filled = 0
    if out_t.size and np.isclose(out_t[0], spec.t0):
        out_states[0] = y0
        filled = 1

    success, message = True, "ok"
    n_steps = n_rejected = 0
    last_t, last_y = spec.t0, y0
    for item in _steps(rhs, y0, spec):
        if item[0] == "fail":
            _, last_t, last_y, n_steps, n_rejected = item
            success = False
            message = f"max_steps exceeded at t={last_t:g}"
            break
        _, t, y, h, K, y_new, n_steps, n_rejected = item
        hi = filled
        while hi < out_t.size and out_t[hi] <= t + h + 1e-12 * max(1.0, abs(t + h)):
            hi += 1
        if hi > filled:
            out_states[filled:hi] = _dense_eval(t, y, h, K, out_t[filled:hi]).T
            filled = hi
        last_t, last_y = t + h, y_new

    times = out_t[:filled]
    states = out_states[:filled]
    diagnostics = {}
    if monitors:
        for name, fn in monitors.items():
            diagnostics[name] = np.array(
                [fn(ti, si) for ti, si in zip(times, states)]
            )
    return TimeSeries(
        times=times,
        states=states,
        diagnostics=diagnostics,
        success=success,
        message=message,
        n_steps=n_steps,
        n_rejected=n_rejected,
    )


def solve_to_plateau(rhs, y0, params, plateau_tol=1e-7, t_cap=None,
                     rtol=1e-9, atol=None):
    """Integrate until the dynamics stall: ||dy/dt||_inf < plateau_tol*gamma*N.

    Returns {"state", "time", "converged"}.  Non-convergence by t_cap
    (default 200/gamma) returns the state at t_cap flagged converged=False.
    """
    gamma, N = params.gamma, params.N
    if t_cap is None:
        t_cap = 200.0 / gamma
    if atol is None:
        atol = 1e-10 * N
    threshold = plateau_tol * gamma * N

    t = 0.0
    y = np.array(y0, dtype=float)
    if float(np.max(np.abs(rhs(t, y)))) < threshold:
        return {"state": y, "time": t, "converged": True}

    chunk = 5.0 / gamma
    while t < t_cap:
        t_next = min(t + chunk, t_cap)
        spec = IntegrationSpec(
            t0=t, t_end=t_next, output_times=np.array([t_next]),
            rtol=rtol, atol=atol, scale=float(N),
        )
        series = integrate(rhs, y, spec)
        if not series.success:
            return {"state": series.states[-1], "time": float(series.times[-1]),
                    "converged": False}
        t, y = t_next, series.states[-1]
        if float(np.max(np.abs(rhs(t, y)))) < threshold:
            return {"state": y, "time": t, "converged": True}
    return {"state": y, "time": t, "converged": False}

"""FastAPI application; one endpoint per experiment driver.

Validation problems surface as 422 with the offending field's location;
numeric failures (singular closed forms, non-unitary inputs, rank-deficient
states) surface as 400 with kind "numeric".
"""

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import experiments
from ..generators import SingularPointError
from . import models

app = FastAPI(title="qfi-bottleneck", version="0.1.0")


def _report(fn):
    try:
        columns, rows, meta = fn()
    except (SingularPointError, ValueError, FloatingPointError,
            np.linalg.LinAlgError) as exc:
        raise HTTPException(status_code=400,
                            detail={"kind": "numeric", "message": str(exc)})
    return models.ReportResponse(columns=columns, rows=rows, meta=meta)


@app.get("/health")
def health():
    return {"status": "ok", "version": app.version}


@app.post("/qfi", response_model=models.ReportResponse)
def qfi_endpoint(req: models.QfiRequest):
    return _report(lambda: experiments.run_qfi(
        models.build_generator(req.generator), models.build_probe(req.probe),
        req.alpha_points))


@app.post("/contour", response_model=models.ReportResponse)
def contour_endpoint(req: models.ContourRequest):
    return _report(lambda: experiments.run_contour(
        req.theta, req.tplus_min, req.tplus_max, req.tplus_points,
        req.alpha_points, req.sign))


@app.post("/optimize", response_model=models.ReportResponse)
def optimize_endpoint(req: models.OptimizeRequest):
    return _report(lambda: experiments.run_optimize(
        models.build_generator(req.generator), req.alpha, req.sampler,
        req.budget, req.seed, req.grid, req.target))


@app.post("/two-copy", response_model=models.ReportResponse)
def two_copy_endpoint(req: models.TwoCopyRequest):
    return _report(lambda: experiments.run_two_copy(
        models.build_generator(req.generator), models.build_probe(req.probe),
        req.alpha_points))


@app.post("/continuity", response_model=models.ReportResponse)
def continuity_endpoint(req: models.ContinuityRequest):
    return _report(lambda: experiments.run_continuity(
        req.state_trials, req.generator_trials, req.eps, req.seed, req.path_check))


@app.post("/conjecture", response_model=models.ReportResponse)
def conjecture_endpoint(req: models.ConjectureRequest):
    return _report(lambda: experiments.run_conjecture(
        req.trials, req.seed, req.threshold, req.alpha_points, req.grid, req.budget))


@app.post("/appendix-b", response_model=models.ReportResponse)
def appendix_b_endpoint(req: models.AppendixBRequest):
    return _report(lambda: experiments.run_appendix_b(req.t22, req.t33, req.alpha_points))

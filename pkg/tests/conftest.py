import numpy as np
import pytest

from windxai import (
    SynthConfig,
    build_feature_matrix,
    filter_operational,
    generic_2mw_curve,
    synthesize_scada,
)
from windxai.scada import sample_validation


@pytest.fixture(scope="session")
def curve():
    return generic_2mw_curve()


@pytest.fixture(scope="session")
def clean_dataset(curve):
    """Small zero-noise dataset generated by the physics baseline."""
    records = filter_operational(synthesize_scada(
        SynthConfig(), curve, 2500, rng_seed=11))
    train_records, val_records = sample_validation(records, 0.2, 5)
    train = build_feature_matrix(train_records)
    validation = build_feature_matrix(val_records, scaler=train.scaler)
    return train, validation


@pytest.fixture(scope="session")
def noisy_dataset(curve):
    """Small noisy dataset with seasonal density/TI variation."""
    config = SynthConfig(noise_std_kw=15.0, density_seasonal=0.6, ti_seasonal=0.5)
    records = filter_operational(synthesize_scada(config, curve, 3000, rng_seed=23))
    train_records, val_records = sample_validation(records, 0.2, 5)
    train = build_feature_matrix(train_records)
    validation = build_feature_matrix(val_records, scaler=train.scaler)
    test = build_feature_matrix(
        filter_operational(synthesize_scada(config, curve, 1500, rng_seed=29)),
        scaler=train.scaler)
    return train, validation, test


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)

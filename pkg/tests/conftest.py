import pytest

from aivalue.model import PositiveFactors, RiskFactors, WeightProfile


@pytest.fixture
def default_weights():
    return WeightProfile.default()


@pytest.fixture
def demo_factors():
    # The fraction-reading of the study's worked vehicle-assistant example.
    return PositiveFactors(entropy_reduction=0.7, efficiency_gain=0.45,
                           cost_saving=0.3, decision_quality=0.0)


@pytest.fixture
def demo_risks():
    return RiskFactors(error_probability=0.12, error_impact=6.0,
                       correction_cost_ratio=0.2)

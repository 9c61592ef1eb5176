"""Synthetic conjunction events with known dynamics.

The generators return events in physical units together with the
``FeatureSchema`` describing them. Every corpus holds a ``time_to_tca``
feature that decreases along each event.
"""
import numpy as np

from ..abstract.messages import Event
from ..abstract.schema import FeatureSchema


def synthetic_schema(feature_names):
    return FeatureSchema(feature_names, time_feature='time_to_tca')


def _event_id(event_arg):
    return 'synthetic_{:04d}'.format(event_arg)


def linear_trend_events(num_events=10, num_features=4, min_length=6,
                        max_length=10, seed=0):
    """Events whose features move along slopes shared by every event.

    # Arguments
        num_events: Int.
        num_features: Int. At least two; the first one is the time to TCA.
        min_length: Int. Minimum number of CDMs per event.
        max_length: Int. Maximum number of CDMs per event.
        seed: Int.

    # Returns
        List of ``Event`` and a ``FeatureSchema``.
    """
    if num_features < 2:
        raise ValueError('At least two features are required', num_features)
    random = np.random.default_rng(seed)
    feature_names = ['time_to_tca'] + [
        'feature_{}'.format(arg) for arg in range(1, num_features)]
    slopes = random.uniform(-1.0, 1.0, num_features - 1)
    events = []
    for event_arg in range(num_events):
        length = random.integers(min_length, max_length + 1)
        steps = np.arange(length)[:, None]
        start_time = random.uniform(5.0, 8.0)
        intercepts = random.normal(0.0, 2.0, num_features - 1)
        time_to_tca = start_time - 0.5 * steps
        features = intercepts + slopes * steps
        values = np.concatenate([time_to_tca, features], axis=1)
        events.append(Event.from_values(_event_id(event_arg), values))
    return events, synthetic_schema(feature_names)


def linear_noise_events(num_events=200, num_oscillators=2, min_length=5,
                        max_length=12, angle=np.pi / 3.0, noise=0.05,
                        seed=0):
    """Events of objects oscillating with a shared linear map plus noise.

    Each oscillator holds a position and a velocity that rotate by
    ``angle`` in phase space at every CDM, so every feature changes by a
    full step and persistence lags behind, while the next CDM is a linear
    function of the current one.

    # Arguments
        num_events: Int.
        num_oscillators: Int. Number of position/velocity feature pairs.
        min_length: Int.
        max_length: Int.
        angle: Float. Phase advance per CDM in radians.
        noise: Float. Standard deviation of the state noise.
        seed: Int.

    # Returns
        List of ``Event`` and a ``FeatureSchema``.
    """
    random = np.random.default_rng(seed)
    feature_names = (
        ['time_to_tca'] +
        ['position_{}'.format(arg) for arg in range(1, num_oscillators + 1)] +
        ['velocity_{}'.format(arg) for arg in range(1, num_oscillators + 1)])
    cosine, sine = np.cos(angle), np.sin(angle)
    events = []
    for event_arg in range(num_events):
        length = random.integers(min_length, max_length + 1)
        amplitude = random.uniform(0.5, 2.0, num_oscillators)
        phase = random.uniform(0.0, 2.0 * np.pi, num_oscillators)
        position = amplitude * np.cos(phase)
        velocity = amplitude * np.sin(phase)
        start_time = random.uniform(5.0, 7.0)
        rows = []
        for step_arg in range(length):
            time_to_tca = start_time - 0.5 * step_arg
            rows.append(np.concatenate([[time_to_tca], position, velocity]))
            position, velocity = (
                cosine * position + sine * velocity +
                random.normal(0.0, noise, num_oscillators),
                cosine * velocity - sine * position +
                random.normal(0.0, noise, num_oscillators))
        events.append(Event.from_values(_event_id(event_arg), rows))
    return events, synthetic_schema(feature_names)


def countdown_events(num_events=50, start_time=5.0, step=1.0, seed=0):
    """Events whose time to TCA decreases by ``step`` from ``start_time``
    down to zero; the miss distance is constant within an event.

    # Returns
        List of ``Event`` and a ``FeatureSchema``.
    """
    if step <= 0.0:
        raise ValueError('``step`` must be positive', step)
    random = np.random.default_rng(seed)
    num_cdms = int(round(start_time / step)) + 1
    time_to_tca = start_time - step * np.arange(num_cdms)
    events = []
    for event_arg in range(num_events):
        miss_distance = np.full(num_cdms, random.uniform(100.0, 1000.0))
        values = np.stack([time_to_tca, miss_distance], axis=1)
        events.append(Event.from_values(_event_id(event_arg), values))
    return events, synthetic_schema(['time_to_tca', 'miss_distance'])

# Copyright 2026 The sddrt Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS-IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Blind T60 estimation from the negative-side variance of decay slopes."""

from ._core import (
    Error,
    EstimationError,
    InvalidArgument,
    IoError,
    Model,
    active_speech_level,
    build_corpus,
    convolve,
    decay_gradients,
    estimate,
    evaluate,
    load_model,
    load_wav,
    make_model,
    measure_nsv,
    measure_t60,
    mix_at_snr,
    nsv,
    run_demo,
    save_wav,
    schroeder_edc,
    simulate_rir,
    spectrogram,
    synthesize_speech,
    train,
)

__version__ = "0.1.0"


def estimate_file(path, model):
    """Estimates T60 of a WAV file; `model` is a Model or a model path."""
    if not isinstance(model, Model):
        model = load_model(model)
    samples, sample_rate = load_wav(path)
    return estimate(samples, sample_rate, model)

#!/usr/bin/env python3
# Copyright 2026 The symfl Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes data/embeddings_50d.txt, the bundled 50-d embedding fixture.

The fixture uses the plain-text GloVe layout (`token v1 ... v50`) and covers
every token of the bundled corpus and survey symptoms. Vectors are synthetic:
each token is a weighted sum of latent topic directions (organ system,
infection, pain, ...) plus a shared offset and token-specific noise, so that
semantically related words end up close together. Point the CLI at a real
`glove.6B.50d.txt` to use published vectors instead.

Usage: make_embedding_fixture.py [output_path]
"""

import sys

import numpy as np

DIM = 50
SEED = 20210503

# token -> {topic: weight}
TOPICS = {
    "of": {"function": 1.0},
    "or": {"function": 1.0},
    "abdominal": {"anatomy": 0.8, "gi": 0.9},
    "ache": {"pain": 1.0, "complaint": 0.5},
    "acid": {"gi": 0.6, "modifier": 0.4},
    "acne": {"skin": 1.0, "complaint": 0.3},
    "allergy": {"ent": 0.4, "skin": 0.4, "disease": 0.4, "complaint": 0.3},
    "anemia": {"metabolic": 0.9, "disease": 0.6},
    "anxiety": {"psych": 1.0},
    "appetite": {"gi": 0.6, "senses": 0.3, "systemic": 0.3},
    "arthritis": {"msk": 0.9, "disease": 0.7, "pain": 0.3},
    "asthma": {"respiratory": 0.9, "disease": 0.7},
    "back": {"anatomy": 0.8, "msk": 0.5},
    "bad": {"modifier": 0.8},
    "bites": {"injury": 0.6, "skin": 0.5},
    "bladder": {"urinary": 1.0, "anatomy": 0.5},
    "blisters": {"skin": 1.0, "injury": 0.3},
    "bloating": {"gi": 1.0, "complaint": 0.4},
    "blurred": {"eye": 0.8, "modifier": 0.4},
    "breath": {"respiratory": 1.0},
    "bronchitis": {"respiratory": 0.9, "infection": 0.7, "disease": 0.5},
    "bruising": {"injury": 0.8, "skin": 0.5},
    "burns": {"injury": 1.0, "skin": 0.5},
    "cataract": {"eye": 1.0, "disease": 0.6},
    "chest": {"anatomy": 0.8, "respiratory": 0.4, "cardio": 0.5},
    "chills": {"infection": 0.8, "systemic": 0.8, "complaint": 0.5},
    "cholesterol": {"metabolic": 1.0, "cardio": 0.5},
    "cold": {"infection": 0.7, "ent": 0.4, "modifier": 0.3},
    "confusion": {"neuro": 0.8, "psych": 0.4},
    "congestion": {"ent": 0.8, "respiratory": 0.5, "complaint": 0.4},
    "conjunctivitis": {"eye": 0.9, "infection": 0.6, "disease": 0.4},
    "constipation": {"gi": 1.0, "complaint": 0.5},
    "cough": {"respiratory": 1.0, "infection": 0.6, "complaint": 0.6},
    "cramps": {"msk": 0.7, "pain": 0.6, "gi": 0.3},
    "cuts": {"injury": 1.0, "skin": 0.4},
    "dandruff": {"skin": 0.8},
    "dehydration": {"metabolic": 0.6, "systemic": 0.6},
    "depression": {"psych": 1.0, "disease": 0.3},
    "diabetes": {"metabolic": 1.0, "disease": 0.8},
    "diarrhea": {"gi": 1.0, "infection": 0.4, "complaint": 0.5},
    "dislocation": {"injury": 0.9, "msk": 0.7},
    "disorder": {"disease": 0.8, "function": 0.3},
    "dizziness": {"neuro": 0.9, "complaint": 0.5},
    "dry": {"modifier": 0.8},
    "earache": {"ent": 0.8, "pain": 0.7},
    "eczema": {"skin": 1.0, "disease": 0.5},
    "eyes": {"eye": 1.0, "anatomy": 0.6},
    "fainting": {"neuro": 0.7, "cardio": 0.5, "complaint": 0.4},
    "fatigue": {"systemic": 1.0, "complaint": 0.6, "infection": 0.3},
    "fever": {"infection": 1.0, "systemic": 0.8, "complaint": 0.6},
    "food": {"gi": 0.5, "function": 0.3},
    "fracture": {"injury": 1.0, "msk": 0.7},
    "frequent": {"modifier": 0.7, "function": 0.3},
    "gain": {"metabolic": 0.5, "modifier": 0.4},
    "gallstones": {"gi": 0.8, "disease": 0.6},
    "glaucoma": {"eye": 1.0, "disease": 0.7},
    "gout": {"msk": 0.7, "metabolic": 0.5, "disease": 0.6},
    "hair": {"anatomy": 0.6, "skin": 0.6},
    "hangover": {"systemic": 0.5, "gi": 0.3, "psych": 0.3},
    "headache": {"pain": 0.8, "neuro": 0.6, "complaint": 0.6,
                 "infection": 0.3},
    "hearing": {"senses": 0.8, "ent": 0.6},
    "heartburn": {"gi": 0.9, "pain": 0.4},
    "hemorrhoids": {"gi": 0.8, "disease": 0.4},
    "hiccups": {"gi": 0.5, "complaint": 0.4},
    "high": {"modifier": 0.8},
    "hives": {"skin": 1.0, "complaint": 0.3},
    "hoarseness": {"ent": 0.9, "complaint": 0.4},
    "hypertension": {"cardio": 1.0, "disease": 0.8},
    "indigestion": {"gi": 1.0, "complaint": 0.5},
    "infection": {"infection": 1.0, "disease": 0.5},
    "insect": {"injury": 0.4, "function": 0.3, "skin": 0.3},
    "insomnia": {"psych": 0.7, "neuro": 0.5, "complaint": 0.4},
    "itching": {"skin": 1.0, "complaint": 0.5},
    "itchy": {"skin": 0.8, "modifier": 0.5},
    "jaundice": {"gi": 0.6, "metabolic": 0.5, "disease": 0.6},
    "joint": {"msk": 1.0, "anatomy": 0.6},
    "kidney": {"urinary": 1.0, "anatomy": 0.6},
    "knee": {"msk": 0.8, "anatomy": 0.8},
    "loss": {"modifier": 0.7, "function": 0.4},
    "memory": {"neuro": 0.8, "psych": 0.5},
    "migraine": {"neuro": 0.9, "pain": 0.8, "disease": 0.3},
    "motion": {"function": 0.6, "neuro": 0.3},
    "mouth": {"anatomy": 0.8, "ent": 0.5},
    "muscle": {"msk": 1.0, "anatomy": 0.6},
    "myalgia": {"msk": 0.8, "pain": 0.8, "infection": 0.3, "complaint": 0.5},
    "nasal": {"ent": 1.0, "anatomy": 0.4},
    "nausea": {"gi": 1.0, "complaint": 0.6},
    "neck": {"anatomy": 0.8, "msk": 0.5},
    "night": {"function": 0.7},
    "nose": {"ent": 1.0, "anatomy": 0.7},
    "nosebleed": {"ent": 0.8, "cardio": 0.4, "injury": 0.3},
    "numbness": {"neuro": 1.0, "complaint": 0.4},
    "obesity": {"metabolic": 1.0, "disease": 0.5},
    "osteoporosis": {"msk": 1.0, "disease": 0.7, "metabolic": 0.3},
    "pain": {"pain": 1.0, "complaint": 0.6},
    "palpitations": {"cardio": 1.0, "complaint": 0.4},
    "pneumonia": {"respiratory": 1.0, "infection": 0.8, "disease": 0.6},
    "poisoning": {"gi": 0.7, "infection": 0.4, "injury": 0.3},
    "psoriasis": {"skin": 1.0, "disease": 0.6},
    "rash": {"skin": 1.0, "complaint": 0.5, "infection": 0.2},
    "red": {"modifier": 0.7, "eye": 0.2, "skin": 0.2},
    "reflux": {"gi": 1.0},
    "runny": {"ent": 0.6, "modifier": 0.5},
    "seizures": {"neuro": 1.0, "disease": 0.5},
    "shortness": {"respiratory": 0.6, "modifier": 0.5},
    "sickness": {"complaint": 0.6, "disease": 0.3, "gi": 0.3},
    "sinusitis": {"ent": 0.9, "infection": 0.6, "disease": 0.4},
    "smell": {"senses": 1.0, "ent": 0.5},
    "sneezing": {"ent": 0.9, "respiratory": 0.4, "complaint": 0.4},
    "snoring": {"ent": 0.6, "respiratory": 0.4, "psych": 0.2},
    "sore": {"pain": 0.8, "modifier": 0.4, "complaint": 0.3},
    "sores": {"skin": 0.8, "pain": 0.4},
    "sprain": {"injury": 0.9, "msk": 0.8},
    "stiffness": {"msk": 0.9, "complaint": 0.3},
    "stomach": {"gi": 1.0, "anatomy": 0.7},
    "stones": {"urinary": 0.5, "gi": 0.3, "function": 0.3},
    "stress": {"psych": 1.0},
    "sunburn": {"skin": 0.9, "injury": 0.5},
    "sweating": {"systemic": 0.7, "skin": 0.4, "complaint": 0.4},
    "sweats": {"systemic": 0.8, "infection": 0.3},
    "swelling": {"cardio": 0.5, "injury": 0.5, "complaint": 0.4},
    "taste": {"senses": 1.0, "gi": 0.3},
    "tendonitis": {"msk": 1.0, "pain": 0.4, "disease": 0.3},
    "throat": {"ent": 1.0, "anatomy": 0.6, "respiratory": 0.3},
    "thyroid": {"metabolic": 0.9, "anatomy": 0.4},
    "tinnitus": {"ent": 0.8, "senses": 0.6, "neuro": 0.3},
    "tonsillitis": {"ent": 0.9, "infection": 0.7, "disease": 0.4},
    "toothache": {"pain": 0.8, "anatomy": 0.3, "ent": 0.3},
    "tremor": {"neuro": 1.0},
    "ulcers": {"gi": 0.7, "skin": 0.4, "disease": 0.4},
    "urination": {"urinary": 1.0},
    "varicose": {"cardio": 0.8, "skin": 0.3},
    "veins": {"cardio": 0.9, "anatomy": 0.6},
    "vision": {"eye": 1.0, "senses": 0.6},
    "vomiting": {"gi": 1.0, "complaint": 0.6, "infection": 0.3},
    "warts": {"skin": 1.0, "infection": 0.3},
    "weight": {"metabolic": 0.8, "function": 0.3},
}

SHARED_SCALE = 0.35
TOPIC_SCALE = 0.45
TOKEN_NOISE = 0.30


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "data/embeddings_50d.txt"
    rng = np.random.default_rng(SEED)
    topic_names = sorted({t for w in TOPICS.values() for t in w})
    centroids = {t: rng.normal(0.0, TOPIC_SCALE, DIM) for t in topic_names}
    shared = rng.normal(0.0, SHARED_SCALE, DIM)

    # function words first, loosely mimicking a frequency-ordered vocabulary
    order = sorted(TOPICS, key=lambda w: ("function" not in TOPICS[w], w))
    with open(out, "w", encoding="utf-8") as f:
        for word in order:
            v = shared.copy()
            for topic, weight in TOPICS[word].items():
                v += weight * centroids[topic]
            v += rng.normal(0.0, TOKEN_NOISE, DIM)
            f.write(word + " " + " ".join(f"{x:.5f}" for x in v) + "\n")


if __name__ == "__main__":
    main()

# Copyright 2026 The HetQA Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Hybrid text, table and knowledge-base question answering."""

from hetqa._hetqa import (
    Bm25Index,
    Error,
    categorize_errors,
    exact_match,
    extract_records,
    format_kb_evidence,
    generate_triplets,
    kb_answer_span,
    normalize_answer,
    superset_match,
    tokenize,
)

__all__ = [
    "Bm25Index",
    "Error",
    "categorize_errors",
    "exact_match",
    "extract_records",
    "format_kb_evidence",
    "generate_triplets",
    "kb_answer_span",
    "normalize_answer",
    "superset_match",
    "tokenize",
]

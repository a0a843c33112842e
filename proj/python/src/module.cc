// Copyright 2026 The HetQA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings for the text utilities, table linearization, BM25 index,
// triplet generation and evaluation metrics.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hetqa/errors.h"
#include "hetqa/eval.h"
#include "hetqa/evidence.h"
#include "hetqa/index.h"
#include "hetqa/kb_pipeline.h"
#include "hetqa/linearize.h"
#include "hetqa/text_util.h"
#include "hetqa/triplets.h"
#include "hetqa/wikitext.h"

namespace py = pybind11;

namespace hetqa {
namespace {

using HitTuple = std::tuple<std::string, double, std::string, std::string>;

py::dict RecordToDict(const LinearizedRecord &r) {
  py::dict d;
  d["record_id"] = r.record_id;
  d["kind"] = std::string(RecordKindName(r.kind));
  d["page_title"] = r.page_title;
  d["section_title"] = r.section_title;
  d["body"] = r.body;
  d["context_before"] = r.context_before;
  d["context_after"] = r.context_after;
  d["index_text"] = r.IndexText();
  return d;
}

std::vector<LinearizedRecord> Records(const std::string &wikitext, std::string title,
                                      int64_t page_id) {
  std::vector<LinearizedRecord> out;
  for (auto &r : ExtractRecords(ParsePage(wikitext, std::move(title), page_id))) {
    if (!r.skip) out.push_back(std::move(r));
  }
  return out;
}

Prediction PredictionFromDict(const py::dict &d) {
  Prediction p;
  p.question = d.contains("question") ? d["question"].cast<std::string>() : "";
  if (d.contains("gold") && !d["gold"].is_none()) p.gold = d["gold"].cast<std::string>();
  if (d.contains("answer_generated")) {
    p.answer_generated = d["answer_generated"].cast<std::string>();
  }
  if (d.contains("evidences")) {
    for (auto item : d["evidences"]) {
      auto pair = item.cast<std::pair<std::string, std::string>>();
      p.evidences.emplace_back(ParseEvidenceKind(pair.first), pair.second);
    }
  }
  return p;
}

class PyBm25Index {
 public:
  explicit PyBm25Index(Bm25Index index) : index_(std::move(index)) {}

  static PyBm25Index Build(
      const std::vector<std::tuple<std::string, std::string, std::string>> &docs,
      const std::string &kind, double k1, double b) {
    std::vector<Passage> passages;
    passages.reserve(docs.size());
    for (const auto &[id, title, text] : docs) {
      passages.push_back(Passage{id, title, text, ParsePassageKind(kind)});
    }
    return PyBm25Index(Bm25Index::Build(std::move(passages), Bm25Params{k1, b}));
  }

  std::vector<HitTuple> Retrieve(const std::string &query, size_t k) const {
    std::vector<HitTuple> out;
    for (const Hit &h : index_.Retrieve(query, k)) {
      out.emplace_back(h.doc_id, h.score, std::string(PassageKindName(h.kind)), h.text);
    }
    return out;
  }

  const Bm25Index &index() const { return index_; }

 private:
  Bm25Index index_;
};

}  // namespace
}  // namespace hetqa

PYBIND11_MODULE(_hetqa, m) {
  using namespace hetqa;
  m.doc() = "Hybrid text, table and knowledge-base question answering.";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvalidArgument &e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const Error &e) {
      error(e.what());
    }
  });

  m.def("normalize_answer", [](const std::string &s) { return NormalizeAnswer(s); },
        py::arg("text"), "Lowercases and strips punctuation, articles and extra spaces.");
  m.def("tokenize", [](const std::string &s) { return Tokenize(s); }, py::arg("text"));
  m.def("exact_match", [](const std::string &g, const std::string &p) { return ExactMatch(g, p); },
        py::arg("gold"), py::arg("prediction"));
  m.def("superset_match",
        [](const std::string &g, const std::string &p) { return SupersetMatch(g, p); },
        py::arg("gold"), py::arg("prediction"));

  m.def(
      "extract_records",
      [](const std::string &wikitext, std::string title, int64_t page_id) {
        py::list out;
        for (const auto &r : Records(wikitext, std::move(title), page_id)) {
          out.append(RecordToDict(r));
        }
        return out;
      },
      py::arg("wikitext"), py::arg("title"), py::arg("page_id") = 1,
      "Linearized tables and infoboxes of one wikitext page.");

  py::class_<PyBm25Index>(m, "Bm25Index")
      .def(py::init(&PyBm25Index::Build), py::arg("docs"), py::arg("kind") = "TEXT",
           py::arg("k1") = 1.2, py::arg("b") = 0.75,
           "Builds an index over (doc_id, title, text) tuples.")
      .def("retrieve", &PyBm25Index::Retrieve, py::arg("query"), py::arg("k") = 10,
           "Top-k (doc_id, score, kind, text) tuples.")
      .def(
          "score",
          [](const PyBm25Index &self, const std::string &q, const std::string &id) {
            return self.index().Score(q, id);
          },
          py::arg("query"), py::arg("doc_id"))
      .def(
          "save", [](const PyBm25Index &self, const std::string &path) { self.index().Save(path); },
          py::arg("path"))
      .def_static(
          "load", [](const std::string &path) { return PyBm25Index(Bm25Index::Load(path)); },
          py::arg("path"))
      .def("__len__", [](const PyBm25Index &self) { return self.index().size(); });

  m.def(
      "generate_triplets",
      [](const std::vector<std::pair<std::string, std::string>> &positives,
         const std::vector<std::string> &pool, size_t num_negatives, uint64_t seed) {
        std::vector<PositivePair> pairs;
        pairs.reserve(positives.size());
        for (const auto &[q, id] : positives) pairs.push_back({q, id});
        std::vector<std::tuple<std::string, std::string, std::string>> out;
        {
          py::gil_scoped_release release;
          for (auto &t : GenerateTriplets(pairs, pool, num_negatives, seed)) {
            out.emplace_back(std::move(t.query), std::move(t.positive_id),
                             std::move(t.negative_id));
          }
        }
        return out;
      },
      py::arg("positives"), py::arg("pool"), py::arg("num_negatives") = 10, py::arg("seed") = 0,
      "(query, positive_id, negative_id) triplets with seeded negative sampling.");

  m.def(
      "format_kb_evidence",
      [](const std::string &question, std::vector<std::string> labels,
         std::optional<bool> boolean_answer) {
        KbResult r;
        r.labels = std::move(labels);
        r.boolean_answer = boolean_answer;
        return FormatKbEvidence(question, r);
      },
      py::arg("question"), py::arg("labels") = std::vector<std::string>{},
      py::arg("boolean_answer") = py::none());
  m.def("kb_answer_span", [](const std::string &s) { return KbAnswerSpan(s); },
        py::arg("evidence_text"));

  m.def(
      "categorize_errors",
      [](const py::list &failures) {
        std::vector<Prediction> predictions;
        for (auto item : failures) predictions.push_back(PredictionFromDict(item.cast<py::dict>()));
        ErrorBreakdown b = CategorizeErrors(predictions);
        py::dict d;
        d["total_errors"] = b.total_errors;
        d["gold_in_evidence"] = b.gold_in_evidence;
        d["gold_in_kb"] = b.gold_in_kb;
        d["gold_in_text"] = b.gold_in_text;
        d["gold_in_tables"] = b.gold_in_tables;
        return d;
      },
      py::arg("failures"),
      "Counts failed predictions whose gold answer occurs in each evidence kind.");
}

// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sparse_frontier/taskgen/sample.hpp"

namespace sparse_frontier::taskgen {

struct PromptBundle {
  std::string task_intro;
  std::string question;
  std::string context;
  std::string answer_format;
  std::string extra_instructions;
  bool plural = false;  // "questions" wording and tags
  bool document_qa = false;
};

namespace detail {

inline std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += lines[i];
  }
  return out;
}

inline std::string numbered(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += std::to_string(i + 1) + ". " + lines[i];
  }
  return out;
}

inline const char* kStoryIntro =
    "You are given a narrative composed of multiple chapters. Throughout these chapters, the "
    "protagonist travels between different locations, meets various characters, and engages in "
    "trading activities. All items mentioned in the narrative are unique, and their ownership can "
    "change through trades. Your task is to carefully read the narrative and answer the questions "
    "based on the provided information.";

inline const char* kCommonExtra =
    "- Keep your explanations clear, coherent, concise, and to the point.\n"
    "- Do not include any additional text, explanations, or reasoning in the answer section.";

}  // namespace detail

inline PromptBundle make_prompt_bundle(const TaskSample& s) {
  PromptBundle b;
  b.context = s.context;
  b.question = detail::join_lines(s.questions);
  switch (s.kind) {
    case TaskKind::niah:
      b.plural = true;
      b.task_intro =
          "I will provide you with a document containing multiple key-value pairs. Your task is "
          "to extract specific values associated with given keys.";
      b.answer_format =
          "1. The answer for <key1> is <value1>.\n2. The answer for <key2> is <value2>.\netc.";
      b.extra_instructions =
          "- Provide answers in the exact order of the requested keys\n"
          "- Each answer must follow the format: \"<number>. The answer for <key> is <value>.\"\n"
          "- Ensure exact key matches - do not modify or paraphrase the keys\n"
          "- Values must match exactly as they appear in the document";
      break;
    case TaskKind::cwe:
      b.task_intro =
          "You will be given a numbered list of words. Your task is to identify the most "
          "frequently occurring words. You should solve this task by carefully reading and "
          "analyzing the word list. Do not attempt to write code or use programming tools to "
          "count frequencies. This is a test of your ability to track word frequencies directly.";
      b.answer_format = "1. word_one\n2. word_two\n...\n10. word_ten";
      b.extra_instructions = "- List exactly 10 words, one per line, numbered from 1 to 10.";
      break;
    case TaskKind::vt:
      b.task_intro =
          "I will provide you with a text containing variable assignments. The text contains two "
          "types of assignments:\n"
          "1. Numeric assignments that set a variable to a number (e.g., \"VAR ABC = 12345\")\n"
          "2. Copy assignments that set a variable equal to another variable (e.g., \"VAR XYZ = "
          "VAR ABC\")\n"
          "Variables are sequences of uppercase letters. The assignments can appear in any order "
          "in the text.";
      b.answer_format = "VARIABLE_ONE VARIABLE_TWO etc.";
      b.extra_instructions =
          "- List ONLY the variable names that resolve to the target value.\n"
          "- Variables can be listed in any order.\n"
          "- Do not include \"VAR\" prefix in your answer. Do not include punctuation.";
      break;
    case TaskKind::story_retrieval:
      b.plural = true;
      b.task_intro = detail::kStoryIntro;
      b.question = detail::numbered(s.questions);
      b.answer_format = "1. ANSWER_ONE\n2. ANSWER_TWO\netc.";
      b.extra_instructions =
          "- For answers, use one line per answer with the number prefix\n"
          "- Do not include articles like 'the' or 'a' in answers\n"
          "- Answers should be specific names/items/locations mentioned in the text";
      break;
    case TaskKind::story_filtering:
      b.task_intro = detail::kStoryIntro;
      b.answer_format = "chapter_id_1, chapter_id_2, ...";
      b.extra_instructions =
          "- In the answer section, provide only the chapter IDs separated by commas.";
      break;
    case TaskKind::story_multihop:
      b.task_intro = detail::kStoryIntro;
      b.answer_format = "ITEM_NAME";
      b.extra_instructions =
          "- Provide only the item name in the answer section.\n"
          "- Do not include articles like 'the' or 'a' in your answer.\n"
          "- The item name must be exactly as mentioned in the text.";
      break;
    case TaskKind::qa:
      b.document_qa = true;
      b.task_intro =
          "I will provide you with multiple documents and ask you a question about one specific "
          "document.";
      b.answer_format = "Your answer here...";
      if (s.metric == MetricKind::f1) {
        b.extra_instructions =
            "- Do not use complete sentences in the answer.\n"
            "- For dates: Include ONLY the COMPLETE date if specifically asked.\n"
            "- For locations: Use the shortest unambiguous form (e.g., 'New York' not 'New York "
            "City').\n"
            "- For comparisons: State ONLY the answer that matches the criteria";
      } else {
        b.extra_instructions =
            "- Answer with the exact text of the correct option only.\n"
            "- Do not add option labels, quotes or commentary.";
      }
      break;
  }
  return b;
}

inline std::string render_bundle(const PromptBundle& b) {
  const std::string tag = b.plural ? "questions" : "question";
  std::string out;
  if (!b.document_qa) out += "You are provided with a task introduction, context, and a question.\n\n";
  out += b.task_intro + "\n\n";
  out += b.plural ? "Below are your questions. I will state them both before and after the context.\n\n"
                  : "Below is your question. I will state it both before and after the context.\n\n";
  out += "<" + tag + ">\n" + b.question + "\n</" + tag + ">\n\n";
  out += "<context>\n" + b.context + "\n</context>\n\n";
  out += "<" + tag + "_repeated>\n" + b.question + "\n</" + tag + "_repeated>\n\n";
  if (b.document_qa) {
    out +=
        "Instructions:\n"
        "1. Provide a brief explanation of your reasoning process.\n"
        "2. Then, give your final answer in this format:\n";
    out += "<answer>\n" + b.answer_format + "\n</answer>\n\n";
    out += "Your response must follow this structure:\n";
  } else {
    out +=
        "Instructions:\n"
        "1. First, provide a brief explanation of your reasoning process. Explain how you "
        "identified\n"
        "   the relevant information from the context and how you determined your answer.\n"
        "2. Then, provide your final answer following this exact format:\n";
    out += "<answer>\n" + b.answer_format + "\n</answer>\n\n";
    out += "Your response must follow this structure exactly:\n";
  }
  out +=
      "<explanation>\n"
      "Your explanation here...\n"
      "</explanation>\n"
      "<answer>\n"
      "Your answer here...\n"
      "</answer>\n\n";
  out += "Important:\n" + b.extra_instructions + "\n" + detail::kCommonExtra + "\n";
  return out;
}

/// Prompt text after the context block: repeated question and instructions.
inline std::string_view instruction_tail(std::string_view prompt) {
  const std::string_view marker = "</context>\n\n";
  const std::size_t pos = prompt.rfind(marker);
  return pos == std::string_view::npos ? prompt : prompt.substr(pos + marker.size());
}

inline std::string render_prompt(const TaskSample& sample) {
  sample.validate();
  return render_bundle(make_prompt_bundle(sample));
}

}  // namespace sparse_frontier::taskgen

#include <iostream>

#include "qcoh/coherence.hpp"
#include "qcoh/entropy.hpp"
#include "qcoh/frames.hpp"
#include "qcoh/json_io.hpp"
#include "qcoh/kochen_specker.hpp"
#include "qcoh/twenty_questions.hpp"

int main(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::cout << "{\"error\": \"not yet implemented\"}\n";
  return 2;
}

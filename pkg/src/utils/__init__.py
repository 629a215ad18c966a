# JSON documents, validators and integer helpers

# Tests package for the radiology impression RAG engine

# Radiology impression RAG package

/** Document shapes served by the assessment service API. */
export {};
